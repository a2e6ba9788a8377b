//! Extremal unital positive maps on `M₂(ℂ)` in their canonical frame.
//!
//! Every extremal unital positive map is unitarily equivalent to one whose
//! Choi matrix is
//!
//! ```text
//! [ 1   0  | 0  y ]
//! [ 0   b  | z̄  t ]
//! [ 0   z  | 0  0 ]
//! [ ȳ   t̄  | 0  u ]
//! ```
//!
//! with `b + u = 1`. For `b > 0` the remaining entries are tied together by
//! `|y| + |z| = √u` and `t² = -4(1-u) y z̄`, which fixes `t` up to sign.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::certify::FaceCoefficients;
use crate::choi::ChoiMat;
use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::scalar::{lit, principal_sqrt, Real};

/// Sign choice for `t`, the square root of `-4(1-u) y z̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Free parameters of the canonical extremal form; `b = 1 - u` and `t` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ExtremalParams<T: Real> {
    pub u: T,
    pub y: Complex<T>,
    pub z: Complex<T>,
    pub t_branch: Branch,
}

impl<T: Real> ExtremalParams<T> {
    pub fn new(u: T, y: Complex<T>, z: Complex<T>, t_branch: Branch) -> Result<Self> {
        let p = Self { u, y, z, t_branch };
        p.validate(T::default_tol())?;
        Ok(p)
    }

    pub fn b(&self) -> T {
        T::one() - self.u
    }

    /// Branch-selected square root of `-4(1-u) y z̄` (principal root for `+`).
    pub fn t(&self) -> Complex<T> {
        let sq = (self.y * self.z.conj()) * (-lit::<T>(4.0) * self.b());
        let root = principal_sqrt(sq);
        match self.t_branch {
            Branch::Plus => root,
            Branch::Minus => -root,
        }
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        let (u, ay, az) = (self.u, self.y.norm(), self.z.norm());
        if !(u.is_finite() && ay.is_finite() && az.is_finite()) {
            return Err(Error::NonFinite);
        }
        if u < -tol || u > T::one() + tol {
            return fail(format!("u = {u} outside [0, 1] (b >= 0, u >= 0, b + u = 1)"));
        }
        if (ay + az) * (ay + az) > u + tol {
            return fail(format!("(|y| + |z|)^2 = {} exceeds u = {u}", (ay + az) * (ay + az)));
        }
        if self.b() > tol {
            let gap = (ay + az - u.sqrt()).abs();
            if gap > tol {
                return fail(format!("|y| + |z| must equal sqrt(u) (off by {gap})"));
            }
        } else if (ay - T::one()).abs() > tol && (az - T::one()).abs() > tol {
            return fail("b = 0 requires |y| = 1 or |z| = 1".to_string());
        }
        Ok(())
    }

    /// Canonical parameters of the one-parameter example family, `0 < s < 1`.
    pub fn example(s: T) -> Result<Self> {
        check_open_unit(s, "s")?;
        let half = Complex::new(s * lit(0.5), T::zero());
        Ok(Self {
            u: s * s,
            y: half,
            z: half,
            t_branch: Branch::Plus,
        })
    }

    /// Random parameters with `u ∈ (0.05, 0.95)`, `|y|, |z| >= floor`, random
    /// phases and branch.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, floor: f64) -> Self {
        let u: f64 = rng.gen_range(0.05..0.95);
        let root = u.sqrt();
        let ay: f64 = rng.gen_range(floor..(root - floor));
        let az = root - ay;
        let py: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let pz: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let polar = |r: f64, phi: f64| Complex::new(lit::<T>(r * phi.cos()), lit::<T>(r * phi.sin()));
        Self {
            u: lit(u),
            y: polar(ay, py),
            z: polar(az, pz),
            t_branch: branch,
        }
    }

    /// Reads the parameters back from a canonical extremal Choi matrix.
    pub fn from_choi(h: &ChoiMat<T>, tol: T) -> Result<Self> {
        let cert = validate_extremal(h, tol)?;
        if !cert.is_pass() {
            return Err(Error::NotExtremal(cert.detail));
        }
        let k = FaceCoefficients::extract(h, tol)?;
        let mut p = Self {
            u: k.u,
            y: k.y,
            z: k.z,
            t_branch: Branch::Plus,
        };
        let plus = p.t();
        if (k.t - plus).norm() > (k.t + plus).norm() {
            p.t_branch = Branch::Minus;
        }
        Ok(p)
    }
}

fn check_open_unit<T: Real>(x: T, name: &str) -> Result<()> {
    if x > T::zero() && x < T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn extremal_form<T: Real>(b: T, u: T, y: Complex<T>, z: Complex<T>, t: Complex<T>) -> ChoiMat<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::zero();
    let re = |x: T| Complex::new(x, T::zero());
    ChoiMat::from_mat4(Mat4::from_rows_unchecked([
        [one, zero, zero, y],
        [zero, re(b), z.conj(), t],
        [zero, z, zero, zero],
        [y.conj(), t.conj(), zero, re(u)],
    ]))
}

/// Canonical Choi matrix of the extremal map with the given parameters.
pub fn build_extremal<T: Real>(params: &ExtremalParams<T>) -> Result<ChoiMat<T>> {
    params.validate(T::default_tol())?;
    Ok(extremal_form(params.b(), params.u, params.y, params.z, params.t()))
}

/// The example family: `a = 1, b = 1 - s², u = s², y = z = s/2, t = i s √(1-s²)`.
pub fn example_family<T: Real>(s: T) -> Result<ChoiMat<T>> {
    check_open_unit(s, "s")?;
    let half = Complex::new(s * lit(0.5), T::zero());
    let b = T::one() - s * s;
    let t = Complex::new(T::zero(), s * b.sqrt());
    Ok(extremal_form(b, s * s, half, half, t))
}

/// Boundary cases where the CP + co-CP split is not unique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub enum DegenerateCase<T: Real> {
    /// `u = 0`: the map `A ↦ diag(a₁₁, a₁₁)`, both CP and co-CP.
    UZero,
    /// `y = 0`: completely copositive.
    YZero { z: Complex<T> },
    /// `z = 0`: completely positive.
    ZZero { y: Complex<T> },
}

pub fn degenerate_case<T: Real>(kind: DegenerateCase<T>) -> Result<ChoiMat<T>> {
    let zero = Complex::zero();
    let in_disc = |w: Complex<T>, name: &str| {
        if w.norm() < T::one() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("|{name}| = {} must be < 1", w.norm())))
        }
    };
    match kind {
        DegenerateCase::UZero => Ok(extremal_form(T::one(), T::zero(), zero, zero, zero)),
        DegenerateCase::YZero { z } => {
            in_disc(z, "z")?;
            let u = z.norm_sqr();
            Ok(extremal_form(T::one() - u, u, zero, z, zero))
        }
        DegenerateCase::ZZero { y } => {
            in_disc(y, "y")?;
            let u = y.norm_sqr();
            Ok(extremal_form(T::one() - u, u, y, zero, zero))
        }
    }
}

/// Checks that `h` has the canonical extremal pattern and satisfies the
/// extremality relations. Checks, in order: `a = 1`, `c = 0`, `b, u >= 0`,
/// `b + u = 1`, the `|t|²` relation (or `|y| = 1 ∨ |z| = 1`, `t = 0` when
/// `b = 0`), `(|y|+|z|)² <= au`, and for `b > 0` the relations
/// `|y|+|z| = √u` and `t² = -4(1-u) y z̄`.
pub fn validate_extremal<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let k = FaceCoefficients::extract(h, tol)?;
    let (ay, az) = (k.y.norm(), k.z.norm());
    let mut checks: Vec<(String, T)> = vec![
        ("a = 1".into(), -(k.a - T::one()).abs()),
        ("c = 0".into(), -k.c.norm()),
        ("(1) b >= 0".into(), k.b),
        ("(1) u >= 0".into(), k.u),
        ("(1) b + u = 1".into(), -(k.b + k.u - T::one()).abs()),
    ];
    if k.b > tol {
        let two = lit::<T>(2.0);
        checks.push((
            "(2) |t|^2 = 2b(u - |y|^2 - |z|^2)".into(),
            -(k.t.norm_sqr() - two * k.b * (k.u - ay * ay - az * az)).abs(),
        ));
    } else {
        checks.push((
            "(2) |y| = 1 or |z| = 1".into(),
            -(ay - T::one()).abs().min((az - T::one()).abs()),
        ));
        checks.push(("(2) t = 0 when b = 0".into(), -k.t.norm()));
    }
    checks.push(("(|y| + |z|)^2 <= au".into(), k.a * k.u - (ay + az) * (ay + az)));
    if k.b > tol {
        checks.push(("|y| + |z| = sqrt(u)".into(), -(ay + az - k.u.max(T::zero()).sqrt()).abs()));
        let rhs = k.y * k.z.conj() * (-lit::<T>(4.0) * (T::one() - k.u));
        checks.push(("t^2 = -4(1-u) y conj(z)".into(), -(k.t * k.t - rhs).norm()));
    }
    Ok(Certificate::from_checks(checks, tol, "extremal"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::matrix_unit;
    use crate::linalg::Mat2;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        cplx(re, im)
    }

    #[test]
    fn identity_and_transpose_are_extremal() {
        let id = build_extremal(&ExtremalParams::new(1.0, c(1.0, 0.0), c(0.0, 0.0), Branch::Plus).unwrap())
            .unwrap();
        assert_eq!(id, ChoiMat::identity_map());
        let tr = build_extremal(&ExtremalParams::new(1.0, c(0.0, 0.0), c(1.0, 0.0), Branch::Plus).unwrap())
            .unwrap();
        assert_eq!(tr, ChoiMat::transpose_map());
    }

    #[test]
    fn example_half_matches_parameter_image() {
        let p = ExtremalParams::<f64>::new(0.25, c(0.25, 0.0), c(0.25, 0.0), Branch::Plus).unwrap();
        assert!((p.t() - c(0.0, 3f64.sqrt() / 4.0)).norm() < 1e-15);
        let h = build_extremal(&p).unwrap();
        assert!(h.max_diff(&example_family(0.5).unwrap()) < 1e-15);
    }

    #[test]
    fn example_point_nine_entries() {
        let h = example_family::<f64>(0.9).unwrap();
        assert!((h[(1, 1)].re - 0.19).abs() < 1e-15);
        assert!((h[(3, 3)].re - 0.81).abs() < 1e-15);
        assert!((h[(0, 3)] - c(0.45, 0.0)).norm() < 1e-15);
        assert!((h[(2, 1)] - c(0.45, 0.0)).norm() < 1e-15);
        assert!((h[(1, 3)] - c(0.0, 0.9 * 0.19f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn example_family_range() {
        assert!(example_family::<f64>(0.0).is_err());
        assert!(example_family::<f64>(1.0).is_err());
        assert!(example_family::<f64>(-0.3).is_err());
    }

    #[test]
    fn degenerate_matrices_verbatim() {
        let u0 = degenerate_case::<f64>(DegenerateCase::UZero).unwrap();
        assert_eq!(*u0.as_mat4(), Mat4::diag([1.0, 1.0, 0.0, 0.0]));

        let y0 = degenerate_case(DegenerateCase::YZero { z: c(0.5, 0.0) }).unwrap();
        let expected = Mat4::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.75, 0.5, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.25],
        ])
        .unwrap();
        assert_eq!(*y0.as_mat4(), expected);

        let z0 = degenerate_case(DegenerateCase::ZZero { y: c(0.5, 0.0) }).unwrap();
        let expected = Mat4::from_real([
            [1.0, 0.0, 0.0, 0.5],
            [0.0, 0.75, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.25],
        ])
        .unwrap();
        assert_eq!(*z0.as_mat4(), expected);

        assert!(degenerate_case(DegenerateCase::ZZero { y: c(1.0, 0.0) }).is_err());
    }

    #[test]
    fn validate_accepts_family_and_degenerate_cases() {
        assert!(validate_extremal(&example_family(0.5).unwrap(), 1e-10).unwrap().is_pass());
        let y0 = degenerate_case(DegenerateCase::YZero { z: c(0.5, 0.0) }).unwrap();
        assert!(validate_extremal(&y0, 1e-10).unwrap().is_pass());
        let u0 = degenerate_case::<f64>(DegenerateCase::UZero).unwrap();
        assert!(validate_extremal(&u0, 1e-10).unwrap().is_pass());
    }

    #[test]
    fn perturbed_t_fails_condition_two() {
        let h = example_family::<f64>(0.5).unwrap();
        let t = h[(1, 3)];
        let t_new = t * ((t.norm_sqr() + 0.05).sqrt() / t.norm());
        let mut m = *h.as_mat4();
        m[(1, 3)] = t_new;
        m[(3, 1)] = t_new.conj();
        let cert = validate_extremal(&ChoiMat::from_mat4(m), 1e-10).unwrap();
        assert!(!cert.is_pass());
        assert!(cert.detail.starts_with("(2)"), "{}", cert.detail);
    }

    #[test]
    fn validate_rejects_off_pattern_matrix() {
        let mut m = *example_family::<f64>(0.5).unwrap().as_mat4();
        m[(0, 2)] = c(0.1, 0.0);
        m[(2, 0)] = c(0.1, 0.0);
        assert!(matches!(
            validate_extremal(&ChoiMat::from_mat4(m), 1e-10),
            Err(Error::NotCanonicalForm { .. })
        ));
    }

    #[test]
    fn invalid_params_are_named() {
        let err = ExtremalParams::<f64>::new(0.5, c(0.1, 0.0), c(0.1, 0.0), Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(ref m) if m.contains("sqrt(u)")));
        let err = ExtremalParams::<f64>::new(1.5, c(0.1, 0.0), c(0.1, 0.0), Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
        let err = ExtremalParams::<f64>::new(1.0, c(0.5, 0.0), c(0.5, 0.0), Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn random_sweep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = ExtremalParams::<f64>::sample(&mut rng, 1e-3);
            let h = build_extremal(&p).unwrap();
            assert!(h.apply(&Mat2::identity()).max_diff(&Mat2::identity()) < 1e-12);
            let (b, ay, az) = (p.b(), p.y.norm(), p.z.norm());
            assert!((p.t().norm_sqr() - 2.0 * b * (p.u - ay * ay - az * az)).abs() < 1e-10);
            assert!(validate_extremal(&h, 1e-10).unwrap().is_pass());
            let back = ExtremalParams::from_choi(&h, 1e-10).unwrap();
            assert_eq!(back.t_branch, p.t_branch);
            assert!((back.u - p.u).abs() < 1e-15);
        }
    }

    #[test]
    fn example_family_equals_parameter_image() {
        for s in [0.05, 0.1, 0.33, 0.5, 0.71, 0.9, 0.99] {
            let via_params = build_extremal(&ExtremalParams::example(s).unwrap()).unwrap();
            assert!(via_params.max_diff(&example_family(s).unwrap()) < 1e-15);
            // unital: φ(E₁₁) + φ(E₂₂) = I
            let id = via_params.apply(&(matrix_unit(0, 0) + matrix_unit(1, 1)));
            assert!(id.max_diff(&Mat2::identity()) < 1e-15);
        }
    }
}
