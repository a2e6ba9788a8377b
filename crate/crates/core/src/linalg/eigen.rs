//! Jacobi routines for the fixed small sizes used by the crate.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::SquareMat;
use crate::certificate::{Certificate, Witness};
use crate::error::Result;
use crate::scalar::{lit, Real};

/// Convergence threshold on the off-diagonal mass, relative to the matrix norm.
pub const JACOBI_THRESHOLD: f64 = 1e-13;
/// Sweep cap for both Jacobi variants.
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T, const N: usize> {
    pub values: [T; N],
    /// `vectors[k]` is the eigenvector of `values[k]`.
    pub vectors: [[Complex<T>; N]; N],
}

fn threshold<T: Real>() -> T {
    lit::<T>(JACOBI_THRESHOLD).max(T::epsilon())
}

/// Cyclic complex Jacobi eigen-solve. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen<T: Real, const N: usize>(m: &SquareMat<T, N>) -> HermitianEigen<T, N> {
    let half = lit::<T>(0.5);
    let mut a = SquareMat::from_fn(|i, j| (m[(i, j)] + m[(j, i)].conj()) * half);
    let mut v = SquareMat::<T, N>::identity();
    let scale = a.frobenius_norm();
    let stop = threshold::<T>() * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= stop || scale.is_zero() {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                // Phase e^{-iφ} on column q makes the pivot real, then a real
                // rotation annihilates it.
                let phase = (apq / mag).conj();
                let tau = (a[(q, q)].re - a[(p, p)].re) / (lit::<T>(2.0) * mag);
                let t = {
                    let sign = if tau >= T::zero() { T::one() } else { -T::one() };
                    sign / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let rot = |i: usize, j: usize| -> Complex<T> {
                    match (i == p, i == q, j == p, j == q) {
                        (true, _, true, _) => Complex::new(c, T::zero()),
                        (true, _, _, true) => Complex::new(s, T::zero()),
                        (_, true, true, _) => phase * (-s),
                        (_, true, _, true) => phase * c,
                        _ if i == j => Complex::new(T::one(), T::zero()),
                        _ => Complex::zero(),
                    }
                };
                let u = SquareMat::<T, N>::from_fn(rot);
                a = u.adjoint() * a * u;
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                v = v * u;
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    HermitianEigen {
        values: order.map(|k| a[(k, k)].re),
        vectors: order.map(|k| v.column(k)),
    }
}

fn off_diagonal_norm<T: Real, const N: usize>(a: &SquareMat<T, N>) -> T {
    let mut s = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Closed-form eigenvalues `(λ_min, λ_max)` of the Hermitian part of a 2×2 matrix.
pub fn eigenvalues2<T: Real>(m: &SquareMat<T, 2>) -> (T, T) {
    let half = lit::<T>(0.5);
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * half;
    let mean = (a + d) * half;
    let radius = ((a - d) * half).hypot(b.norm());
    (mean - radius, mean + radius)
}

/// Singular values in descending order, by one-sided (Hestenes) Jacobi on
/// the columns. Accurate for tiny singular values, unlike `eig(M*M)`.
pub fn singular_values<T: Real, const N: usize>(m: &SquareMat<T, N>) -> [T; N] {
    let mut cols: [[Complex<T>; N]; N] = std::array::from_fn(|j| m.column(j));
    let tol = threshold::<T>();
    let dot = |x: &[Complex<T>; N], y: &[Complex<T>; N]| {
        (0..N).fold(Complex::<T>::zero(), |acc, k| acc + x[k].conj() * y[k])
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..N {
            for j in (i + 1)..N {
                let alpha = dot(&cols[i], &cols[i]).re;
                let beta = dot(&cols[j], &cols[j]).re;
                let gamma = dot(&cols[i], &cols[j]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g <= T::min_positive_value() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (lit::<T>(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in head[i].iter_mut().zip(tail[0].iter_mut()) {
                    let (a, b) = (*x, *y * phase);
                    *x = a * c - b * s;
                    *y = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: [T; N] = std::array::from_fn(|j| dot(&cols[j], &cols[j]).re.sqrt());
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// PSD test: passes iff the estimated smallest eigenvalue is `>= -tol`.
/// The margin is `λ_min`; on failure the witness is its unit eigenvector.
pub fn psd_check<T: Real, const N: usize>(m: &SquareMat<T, N>, tol: T) -> Result<Certificate<T>> {
    m.require_hermitian(tol)?;
    let eig = hermitian_eigen(m);
    let lambda_min = eig.values[0];
    let witness = Witness::Vector {
        vector: eig.vectors[0].to_vec(),
    };
    Ok(Certificate::single(lambda_min, tol, "lambda_min", Some(witness)))
}

/// Number of singular values above `tol · σ_max`.
pub fn rank_estimate<T: Real, const N: usize>(m: &SquareMat<T, N>, tol: T) -> usize {
    let sv = singular_values(m);
    let cutoff = tol * sv[0];
    if sv[0].is_zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > cutoff).count()
}
