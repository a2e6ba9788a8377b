//! Decision procedures for positivity classes of maps on `M₂(ℂ)`.
//!
//! A map is positive iff its Choi matrix is block-positive, completely
//! positive iff the Choi matrix is PSD, and completely copositive iff the
//! partial transpose is PSD. For Choi matrices already in the canonical face
//! form the last two reduce to closed-form minor conditions.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Witness};
use crate::choi::ChoiMat;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues2, psd_check, Mat2};
use crate::scalar::{as_f64, lit, Real};

/// Largest modulus tolerated at the forced-zero positions of the face form.
pub const CANONICAL_TOL: f64 = 1e-9;

fn canonical_tol<T: Real>() -> T {
    lit::<T>(CANONICAL_TOL).max(T::epsilon() * lit(16.0))
}

/// Coefficients of a Choi matrix in the canonical face form
///
/// ```text
/// [ a   c  | 0  y ]
/// [ c̄   b  | z̄  t ]
/// [ 0   z  | 0  0 ]
/// [ ȳ   t̄  | 0  u ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct FaceCoefficients<T: Real> {
    pub a: T,
    pub b: T,
    pub u: T,
    pub c: Complex<T>,
    pub y: Complex<T>,
    pub z: Complex<T>,
    pub t: Complex<T>,
}

impl<T: Real> FaceCoefficients<T> {
    /// Reads the coefficients, failing if `h` is not Hermitian or an
    /// off-pattern entry exceeds [`CANONICAL_TOL`].
    pub fn extract(h: &ChoiMat<T>, tol: T) -> Result<Self> {
        let m = h.as_mat4();
        m.require_hermitian(tol.max(canonical_tol()))?;
        let off_pattern = [(0, 2), (2, 0), (2, 2), (2, 3), (3, 2)]
            .iter()
            .map(|&ij| m[ij].norm())
            .fold(T::zero(), T::max);
        if off_pattern > canonical_tol() {
            return Err(Error::NotCanonicalForm {
                reason: "nonzero entry at a forced-zero position".into(),
                residual: as_f64(off_pattern),
            });
        }
        Ok(Self {
            a: m[(0, 0)].re,
            b: m[(1, 1)].re,
            u: m[(3, 3)].re,
            c: m[(0, 1)],
            y: m[(0, 3)],
            z: m[(2, 1)],
            t: m[(1, 3)],
        })
    }
}

/// Bloch-sphere grid used by [`block_positive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlochGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for BlochGrid {
    fn default() -> Self {
        Self {
            n_theta: 96,
            n_phi: 192,
        }
    }
}

/// Grid minima refined by local descent.
pub const DESCENT_STARTS: usize = 8;
pub const DESCENT_ITERATIONS: usize = 200;

/// `v(θ, φ) = (cos θ/2, e^{iφ} sin θ/2)`.
pub fn bloch_vector<T: Real>(theta: T, phi: T) -> [Complex<T>; 2] {
    let half = theta * lit(0.5);
    [
        Complex::new(half.cos(), T::zero()),
        Complex::from_polar(half.sin(), phi),
    ]
}

/// Compression `[⟨v, H_ij v⟩]_{ij}` of the Choi matrix by a vector.
pub fn compress<T: Real>(h: &ChoiMat<T>, v: &[Complex<T>; 2]) -> Mat2<T> {
    Mat2::from_fn(|i, j| h.block(i, j).quadratic_form(v))
}

/// Map positivity via block-positivity of the Choi matrix.
///
/// Minimises `λ_min([⟨v, H_ij v⟩])` over unit `v` by a Bloch grid scan
/// followed by coordinate descent from the best grid points. A failure is
/// exact (the witness `v` is explicit); a pass is a numerical estimate.
pub fn block_positive<T: Real>(h: &ChoiMat<T>, grid: BlochGrid, tol: T) -> Result<Certificate<T>> {
    h.as_mat4().require_hermitian(tol)?;
    if grid.n_theta < 2 || grid.n_phi < 1 {
        return Err(Error::OutOfRange("Bloch grid needs n_theta >= 2 and n_phi >= 1".into()));
    }
    let objective = |theta: T, phi: T| eigenvalues2(&compress(h, &bloch_vector(theta, phi))).0;
    let d_theta = T::PI() / lit((grid.n_theta - 1) as f64);
    let d_phi = T::TAU() / lit(grid.n_phi as f64);

    let mut scanned: Vec<(T, usize, usize)> = Vec::with_capacity(grid.n_theta * grid.n_phi);
    for k in 0..grid.n_theta {
        let theta = d_theta * lit(k as f64);
        for l in 0..grid.n_phi {
            scanned.push((objective(theta, d_phi * lit(l as f64)), k, l));
        }
    }
    scanned.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then((x.1, x.2).cmp(&(y.1, y.2)))
    });

    let mut best = (T::infinity(), T::zero(), T::zero());
    for &(value, k, l) in scanned.iter().take(DESCENT_STARTS) {
        let mut cur = (value, d_theta * lit(k as f64), d_phi * lit(l as f64));
        let (mut h_theta, mut h_phi) = (d_theta, d_phi);
        for _ in 0..DESCENT_ITERATIONS {
            let moves = [(h_theta, T::zero()), (-h_theta, T::zero()), (T::zero(), h_phi), (T::zero(), -h_phi)];
            let mut next = cur;
            for (dt, dp) in moves {
                let cand = (cur.1 + dt, cur.2 + dp);
                let val = objective(cand.0, cand.1);
                if val < next.0 {
                    next = (val, cand.0, cand.1);
                }
            }
            if next.0 < cur.0 {
                cur = next;
            } else {
                h_theta = h_theta * lit(0.5);
                h_phi = h_phi * lit(0.5);
            }
        }
        if cur.0 < best.0 {
            best = cur;
        }
    }

    let v = bloch_vector(best.1, best.2);
    let witness = Witness::BlockVector {
        vector: v,
        compressed: compress(h, &v),
    };
    Ok(Certificate::single(best.0, tol, "block-positivity", Some(witness)))
}

/// Complete positivity: the Choi matrix is PSD.
pub fn cp_check<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let mut cert = psd_check(h.as_mat4(), tol)?;
    cert.detail = "lambda_min(H)".into();
    if let Some(Witness::Condition { name }) = cert.witness.as_mut() {
        *name = cert.detail.clone();
    }
    Ok(cert)
}

/// Complete copositivity: the partial transpose of the Choi matrix is PSD.
pub fn ccp_check<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let mut cert = psd_check(h.partial_transpose().as_mat4(), tol)?;
    cert.detail = "lambda_min(H^tau)".into();
    Ok(cert)
}

/// Membership in the face `F_{ξ,η} = {φ : φ(P_ξ) η = 0}`; margin is `-‖φ(P_ξ)η‖`.
pub fn face_membership<T: Real>(
    h: &ChoiMat<T>,
    xi: &[Complex<T>; 2],
    eta: &[Complex<T>; 2],
    tol: T,
) -> Certificate<T> {
    let residual = h.face_residual(xi, eta);
    Certificate::single(-residual, tol, "|phi(P_xi) eta|", None)
}

/// Complete positivity for canonical-form Choi matrices via the minor
/// conditions (A1)–(A5), with (A5) in its expanded form.
pub fn canonical_cp_conditions<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let k = FaceCoefficients::extract(h, tol)?;
    Ok(Certificate::from_checks(minor_conditions(&k, false), tol, "(A1)-(A5)"))
}

/// Complete copositivity for canonical-form Choi matrices via (B1)–(B5).
pub fn canonical_ccp_conditions<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let k = FaceCoefficients::extract(h, tol)?;
    Ok(Certificate::from_checks(minor_conditions(&k, true), tol, "(B1)-(B5)"))
}

fn minor_conditions<T: Real>(k: &FaceCoefficients<T>, copositive: bool) -> Vec<(String, T)> {
    let two = lit::<T>(2.0);
    // The partial transpose swaps the roles of y and z and conjugates t.
    let (tag, vanishing, coupled, t) = if copositive {
        ("B", k.y, k.z, k.t.conj())
    } else {
        ("A", k.z, k.y, k.t)
    };
    let det3 = k.b * (k.a * k.u - coupled.norm_sqr()) + two * (k.c * t * coupled.conj()).re
        - k.a * t.norm_sqr()
        - k.u * k.c.norm_sqr();
    vec![
        ("a >= 0".into(), k.a),
        ("b >= 0".into(), k.b),
        ("u >= 0".into(), k.u),
        (format!("({tag}1) {} = 0", if copositive { "y" } else { "z" }), -vanishing.norm()),
        (
            format!("({tag}2) |{}|^2 <= au", if copositive { "z" } else { "y" }),
            k.a * k.u - coupled.norm_sqr(),
        ),
        (format!("({tag}3) |t|^2 <= bu"), k.b * k.u - t.norm_sqr()),
        (format!("({tag}4) |c|^2 <= ab"), k.a * k.b - k.c.norm_sqr()),
        (format!("({tag}5) 3x3 principal minor >= 0"), det3),
    ]
}

/// Necessary conditions for a positive map in canonical face form:
/// `|c|² <= ab`, `|t|² <= bu`, `(|y| + |z|)² <= au`.
pub fn face_form_inequalities<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<Certificate<T>> {
    let k = FaceCoefficients::extract(h, tol)?;
    let s = k.y.norm() + k.z.norm();
    Ok(Certificate::from_checks(
        vec![
            ("(1) |c|^2 <= ab".into(), k.a * k.b - k.c.norm_sqr()),
            ("(2) |t|^2 <= bu".into(), k.b * k.u - k.t.norm_sqr()),
            ("(3) (|y| + |z|)^2 <= au".into(), k.a * k.u - s * s),
        ],
        tol,
        "face form",
    ))
}
