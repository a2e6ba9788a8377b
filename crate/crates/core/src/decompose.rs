//! Closed-form split of an extremal unital positive map into a completely
//! positive part and a completely copositive part, with Kraus operators.
//!
//! For canonical parameters `(u, y, z, t)` with `0 < u < 1` and `y, z ≠ 0`
//! the split is unique and both parts have rank-one (partially transposed)
//! Choi matrices:
//!
//! ```text
//! H1 = [ |y|/√u        c          | 0  y   ]    H2 = [ |z|/√u       -c          | 0  0   ]
//!      [ c̄        |z|(1-u)/√u     | 0  t/2 ]         [ -c̄     |y|(1-u)/√u     | z̄  t/2 ]
//!      [ 0             0          | 0  0   ]         [ 0            z           | 0  0   ]
//!      [ ȳ            t̄/2         | 0 |y|√u ]        [ 0           t̄/2          | 0 |z|√u ]
//! ```
//!
//! with `c = -z t / (2|z|√u)`, so that `c² = -(1-u) y z / u`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::certificate::Certificate;
use crate::certify::{ccp_check, cp_check, face_membership};
use crate::choi::{ChoiMat, FaceFrame};
use crate::error::{Error, Result};
use crate::extremal::ExtremalParams;
use crate::linalg::{Mat2, Mat4};
use crate::scalar::{lit, principal_sqrt, Real};

/// Lower bound on `u`, `|y|`, `|z|` (and `1 - u`) accepted by [`decompose_extremal`].
pub const HYPOTHESIS_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct DecompositionPair<T: Real> {
    /// Choi matrix of the completely positive part.
    pub h1: ChoiMat<T>,
    /// Choi matrix of the completely copositive part.
    pub h2: ChoiMat<T>,
    /// Kraus operator of the CP part: `φ₁(A) = U₁ A U₁*`.
    pub u1: Mat2<T>,
    /// Kraus operator of the co-CP part: `φ₂(A) = U₂ Aᵀ U₂*`.
    pub u2: Mat2<T>,
    pub c: Complex<T>,
    /// Square roots with `y₁² = y`, `z₁² = z`, `t = 2i√(1-u) y₁ z̄₁`.
    pub y1: Complex<T>,
    pub z1: Complex<T>,
}

impl<T: Real> DecompositionPair<T> {
    /// `φ₁(A) + φ₂(A)` evaluated through the Kraus operators.
    pub fn apply_kraus(&self, a: &Mat2<T>) -> Mat2<T> {
        self.u1 * *a * self.u1.adjoint() + self.u2 * a.transpose() * self.u2.adjoint()
    }
}

fn check_hypotheses<T: Real>(p: &ExtremalParams<T>) -> Result<()> {
    let floor = lit::<T>(HYPOTHESIS_FLOOR);
    if p.u <= floor {
        return Err(Error::HypothesisViolated("u = 0".into()));
    }
    if p.y.norm() <= floor {
        return Err(Error::HypothesisViolated("y = 0".into()));
    }
    if p.z.norm() <= floor {
        return Err(Error::HypothesisViolated("z = 0".into()));
    }
    if p.b() <= floor {
        return Err(Error::HypothesisViolated("u = 1 (b = 0)".into()));
    }
    Ok(())
}

/// Splits a canonical extremal Choi matrix into its CP and co-CP parts.
pub fn decompose_extremal<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<DecompositionPair<T>> {
    let params = ExtremalParams::from_choi(h, tol)?;
    check_hypotheses(&params)?;
    Ok(decompose_params(&params))
}

/// Splits the extremal map with the given canonical parameters.
pub fn decompose_params<T: Real>(params: &ExtremalParams<T>) -> DecompositionPair<T> {
    let u = params.u;
    let (y, z, t) = (params.y, params.z, params.t());
    let (ay, az) = (y.norm(), z.norm());
    let b = T::one() - u;
    let su = u.sqrt();
    let half = lit::<T>(0.5);
    let re = |x: T| Complex::new(x, T::zero());
    let zero = Complex::zero();

    let c = -(z * t) / re(lit::<T>(2.0) * az * su);
    let t_half = t * half;

    let h1 = ChoiMat::from_mat4(Mat4::from_rows_unchecked([
        [re(ay / su), c, zero, y],
        [c.conj(), re(az * b / su), zero, t_half],
        [zero, zero, zero, zero],
        [y.conj(), t_half.conj(), zero, re(ay * su)],
    ]));
    let h2 = ChoiMat::from_mat4(Mat4::from_rows_unchecked([
        [re(az / su), -c, zero, zero],
        [-c.conj(), re(ay * b / su), z.conj(), t_half],
        [zero, z, zero, zero],
        [zero, t_half.conj(), zero, re(az * su)],
    ]));

    let (u1, u2, y1, z1) = kraus_operators(params);
    DecompositionPair { h1, h2, u1, u2, c, y1, z1 }
}

/// Kraus operators `(U₁, U₂, y₁, z₁)` with `φ(A) = U₁AU₁* + U₂AᵀU₂*`.
///
/// `y₁` is the principal square root of `y` and `z̄₁ = t / (2i√(1-u) y₁)`.
/// Flipping both signs leaves the two maps unchanged.
pub fn kraus_operators<T: Real>(params: &ExtremalParams<T>) -> (Mat2<T>, Mat2<T>, Complex<T>, Complex<T>) {
    let u = params.u;
    let sb = (T::one() - u).sqrt();
    let y1 = principal_sqrt(params.y);
    let z1 = (params.t() / (Complex::new(T::zero(), lit::<T>(2.0) * sb) * y1)).conj();
    let i = Complex::new(T::zero(), T::one());
    let q = u.sqrt().sqrt();
    let zero = Complex::zero();
    let u1 = Mat2::from_rows_unchecked([
        [y1 / q, zero],
        [i * z1.conj() * sb / q, y1.conj() * q],
    ]);
    let u2 = Mat2::from_rows_unchecked([
        [z1 / q, zero],
        [-i * y1.conj() * sb / q, z1.conj() * q],
    ]);
    (u1, u2, y1, z1)
}

/// Checks `H = H1 + H2`, `H1` CP, `H2` co-CP, and both parts in the face
/// `F_{e₂, e₁}` of the canonical frame.
pub fn verify_decomposition<T: Real>(h: &ChoiMat<T>, pair: &DecompositionPair<T>, tol: T) -> Certificate<T> {
    let frame = FaceFrame::<T>::standard();
    let psd_margin = |cert: Result<Certificate<T>>| match cert {
        Ok(c) => c.margin,
        Err(_) => T::neg_infinity(),
    };
    let checks = vec![
        ("H1 + H2 = H".to_string(), -(pair.h1 + pair.h2).max_diff(h)),
        ("H1 is PSD (phi1 CP)".to_string(), psd_margin(cp_check(&pair.h1, tol))),
        ("H2^tau is PSD (phi2 co-CP)".to_string(), psd_margin(ccp_check(&pair.h2, tol))),
        (
            "phi1 in F(xi, eta)".to_string(),
            face_membership(&pair.h1, &frame.xi, &frame.eta, tol).margin,
        ),
        (
            "phi2 in F(xi, eta)".to_string(),
            face_membership(&pair.h2, &frame.xi, &frame.eta, tol).margin,
        ),
    ];
    Certificate::from_checks(checks, tol, "decomposition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::matrix_unit;
    use crate::extremal::{build_extremal, degenerate_case, example_family, Branch, DegenerateCase};
    use crate::linalg::rank_estimate;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    // Independent rank-one check: a PSD rank-one matrix equals v v* with
    // v = (column k) / sqrt(M_kk) for any k with M_kk > 0.
    fn rank_one_residual(m: &Mat4<f64>) -> f64 {
        let k = (0..4)
            .max_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap())
            .unwrap();
        let s = m[(k, k)].re.sqrt();
        let v: [Complex<f64>; 4] = std::array::from_fn(|i| m[(i, k)] / s);
        m.max_diff(&Mat4::outer(&v, &v))
    }

    #[test]
    fn example_half_entries() {
        let h = example_family(0.5).unwrap();
        let pair = decompose_extremal(&h, TOL).unwrap();
        let r3 = 3f64.sqrt();
        let (h1, h2) = (pair.h1, pair.h2);
        assert!((h1[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((h1[(1, 1)].re - 0.375).abs() < 1e-12);
        assert!((h1[(3, 3)].re - 0.125).abs() < 1e-12);
        assert!((h1[(1, 3)] - cplx(0.0, r3 / 8.0)).norm() < 1e-12);
        assert!((pair.c - cplx(0.0, -r3 / 4.0)).norm() < 1e-12);
        assert!((h1[(0, 3)] - cplx(0.25, 0.0)).norm() < 1e-12);
        assert!((h2[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((h2[(1, 1)].re - 0.375).abs() < 1e-12);
        assert!((h2[(3, 3)].re - 0.125).abs() < 1e-12);
        assert!((h2[(1, 3)] - cplx(0.0, r3 / 8.0)).norm() < 1e-12);
        assert!((h2[(0, 1)] - cplx(0.0, r3 / 4.0)).norm() < 1e-12);
        assert!((h2[(2, 1)] - cplx(0.25, 0.0)).norm() < 1e-12);

        // brute-force oracle: sum, rank-one PSD structure
        assert!((h1 + h2).max_diff(&h) < 1e-15);
        assert!(rank_one_residual(h1.as_mat4()) < 1e-15);
        assert!(rank_one_residual(h2.partial_transpose().as_mat4()) < 1e-15);
        assert_eq!(rank_estimate(h1.as_mat4(), 1e-9), 1);
    }

    #[test]
    fn symmetric_instance_mirrors_parts() {
        // y = z: H2^τ has the same moduli as H1 pattern-wise
        let pair = decompose_extremal(&example_family(0.37).unwrap(), TOL).unwrap();
        let (a, b) = (pair.h1.as_mat4(), pair.h2.partial_transpose());
        for r in 0..4 {
            for c in 0..4 {
                assert!((a[(r, c)].norm() - b[(r, c)].norm()).abs() < 1e-14);
            }
        }
        assert!((pair.h1[(0, 1)] + pair.h2[(0, 1)]).norm() < 1e-15);
    }

    #[test]
    fn kraus_operators_reproduce_parts() {
        let params = ExtremalParams::new(0.3, cplx(-0.2, 0.15), Complex::from_polar(0.3f64.sqrt() - 0.25, 2.1), Branch::Minus)
            .unwrap();
        let h = build_extremal(&params).unwrap();
        let pair = decompose_extremal(&h, TOL).unwrap();
        let (u1, u2) = (pair.u1, pair.u2);
        let cp = ChoiMat::from_action(|a| u1 * *a * u1.adjoint());
        let ccp = ChoiMat::from_action(|a| u2 * a.transpose() * u2.adjoint());
        assert!(cp.max_diff(&pair.h1) < 1e-12);
        assert!(ccp.max_diff(&pair.h2) < 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                let e = matrix_unit(i, j);
                assert!(pair.apply_kraus(&e).max_diff(&h.apply(&e)) < 1e-12);
            }
        }
        let unital = u1 * u1.adjoint() + u2 * u2.adjoint();
        assert!(unital.max_diff(&Mat2::identity()) < 1e-12);
        assert!((pair.y1 * pair.y1 - params.y).norm() < 1e-14);
        assert!((pair.z1 * pair.z1 - params.z).norm() < 1e-14);
        // c = -i √(1-u)/√u · y₁ z₁
        let cex = -Complex::new(0.0, 1.0) * ((1.0 - params.u) / params.u).sqrt() * pair.y1 * pair.z1;
        assert!((cex - pair.c).norm() < 1e-14);
    }

    #[test]
    fn hypotheses_are_named() {
        let z0 = degenerate_case(DegenerateCase::ZZero { y: cplx(0.5, 0.0) }).unwrap();
        assert_eq!(decompose_extremal(&z0, TOL), Err(Error::HypothesisViolated("z = 0".into())));
        let y0 = degenerate_case(DegenerateCase::YZero { z: cplx(0.5, 0.0) }).unwrap();
        assert_eq!(decompose_extremal(&y0, TOL), Err(Error::HypothesisViolated("y = 0".into())));
        let u0 = degenerate_case::<f64>(DegenerateCase::UZero).unwrap();
        assert_eq!(decompose_extremal(&u0, TOL), Err(Error::HypothesisViolated("u = 0".into())));
        let bad = ChoiMat::<f64>::from_mat4(Mat4::identity());
        assert!(decompose_extremal(&bad, TOL).is_err());
    }

    #[test]
    fn verify_accepts_output_and_rejects_tampering() {
        let h = example_family(0.5).unwrap();
        let pair = decompose_extremal(&h, TOL).unwrap();
        assert!(verify_decomposition(&h, &pair, TOL).is_pass());

        let swapped = DecompositionPair { h1: pair.h2, h2: pair.h1, ..pair };
        let cert = verify_decomposition(&h, &swapped, TOL);
        assert!(!cert.is_pass());
        assert_eq!(cert.detail, "H1 is PSD (phi1 CP)");

        let t = h[(1, 3)];
        let mut m1 = *pair.h1.as_mat4();
        let mut m2 = *pair.h2.as_mat4();
        m1[(1, 3)] = t;
        m1[(3, 1)] = t.conj();
        m2[(1, 3)] = cplx(0.0, 0.0);
        m2[(3, 1)] = cplx(0.0, 0.0);
        let forced = DecompositionPair {
            h1: ChoiMat::from_mat4(m1),
            h2: ChoiMat::from_mat4(m2),
            ..pair
        };
        let cert = verify_decomposition(&h, &forced, TOL);
        assert!(!cert.is_pass());
        assert!(cert.detail.contains("PSD"));
    }

    #[test]
    fn random_sweep_entry_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut distinct_found = false;
        for _ in 0..500 {
            let p = ExtremalParams::<f64>::sample(&mut rng, 1e-3);
            let h = build_extremal(&p).unwrap();
            let pair = decompose_extremal(&h, TOL).unwrap();
            let (u, ay, az) = (p.u, p.y.norm(), p.z.norm());
            let (h1, h2) = (pair.h1, pair.h2);
            let t = p.t();
            // |y| t₁ = y c̄ √u, |z| t₂ = -z̄ c √u
            assert!((h1[(1, 3)] * ay - p.y * pair.c.conj() * u.sqrt()).norm() < 1e-12);
            assert!((h2[(1, 3)] * az + p.z.conj() * pair.c * u.sqrt()).norm() < 1e-12);
            // saturated minors
            assert!((h1[(0, 0)].re * h1[(3, 3)].re - ay * ay).abs() < 1e-12);
            assert!((h1[(1, 1)].re * h1[(3, 3)].re - (t * 0.5).norm_sqr()).abs() < 1e-12);
            assert!((h1[(0, 0)].re * h1[(1, 1)].re - pair.c.norm_sqr()).abs() < 1e-12);
            assert!((h2[(0, 0)].re * h2[(3, 3)].re - az * az).abs() < 1e-12);
            assert!((h2[(0, 0)].re * h2[(1, 1)].re - pair.c.norm_sqr()).abs() < 1e-12);
            assert!(verify_decomposition(&h, &pair, TOL).is_pass());
            let phi1_unit = h1.apply(&Mat2::identity());
            let (lo, hi) = crate::linalg::eigenvalues2(&phi1_unit);
            if hi - lo > 1e-3 {
                distinct_found = true;
            }
            let _ = u;
        }
        assert!(distinct_found, "phi1(I) should not always be scalar");
    }

    #[test]
    fn f32_decomposition_of_example() {
        let h = example_family::<f32>(0.5).unwrap();
        let pair = decompose_extremal(&h, 1e-4).unwrap();
        assert!(verify_decomposition(&h, &pair, 1e-4).is_pass());
        assert!((pair.h1[(1, 1)].re - 0.375).abs() < 1e-6);
    }
}
