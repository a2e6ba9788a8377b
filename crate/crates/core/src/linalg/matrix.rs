use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{as_f64, is_finite_c, Real};

/// Dense square complex matrix of fixed size, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareMat<T, const N: usize> {
    rows: [[Complex<T>; N]; N],
}

/// 2×2 complex matrix: elements of M₂(ℂ), unitaries, Kraus operators.
pub type Mat2<T> = SquareMat<T, 2>;
/// 4×4 complex matrix, identified with M₂(M₂(ℂ)).
pub type Mat4<T> = SquareMat<T, 4>;

impl<T: Real, const N: usize> SquareMat<T, N> {
    /// Builds a matrix from rows, rejecting NaN and infinite entries.
    pub fn new(rows: [[Complex<T>; N]; N]) -> Result<Self> {
        if rows.iter().flatten().all(|z| is_finite_c(*z)) {
            Ok(Self { rows })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Builds a matrix from real parts only.
    pub fn from_real(rows: [[T; N]; N]) -> Result<Self> {
        Self::new(rows.map(|r| r.map(|x| Complex::new(x, T::zero()))))
    }

    pub(crate) fn from_rows_unchecked(rows: [[Complex<T>; N]; N]) -> Self {
        Self { rows }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn zeros() -> Self {
        Self {
            rows: [[Complex::zero(); N]; N],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn diag(d: [T; N]) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex::new(d[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Outer product `u v*`.
    pub fn outer(u: &[Complex<T>; N], v: &[Complex<T>; N]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> &[[Complex<T>; N]; N] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> [Complex<T>; N] {
        std::array::from_fn(|i| self.rows[i][j])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_fn(|i, j| self.rows[i][j] * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::zero(), |acc, i| acc + self.rows[i][i])
    }

    pub fn mul_vec(&self, v: &[Complex<T>; N]) -> [Complex<T>; N] {
        std::array::from_fn(|i| {
            (0..N).fold(Complex::zero(), |acc, k| acc + self.rows[i][k] * v[k])
        })
    }

    /// `⟨v, M v⟩` with the inner product antilinear in the first slot.
    pub fn quadratic_form(&self, v: &[Complex<T>; N]) -> Complex<T> {
        let mv = self.mul_vec(v);
        (0..N).fold(Complex::zero(), |acc, i| acc + v[i].conj() * mv[i])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.rows
            .iter()
            .flatten()
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.rows
            .iter()
            .flatten()
            .fold(T::zero(), |s, z| s + z.norm_sqr())
            .sqrt()
    }

    /// `max |M - N|` entrywise.
    pub fn max_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_residual(&self) -> T {
        self.max_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn unitarity_residual(&self) -> T {
        (self.adjoint() * *self).max_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }

    /// `true` when the matrix is Hermitian within `tol` and its smallest
    /// eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: T) -> bool {
        self.is_hermitian(tol) && super::eigen::hermitian_eigen(self).values[0] >= -tol
    }

    pub(crate) fn require_hermitian(&self, tol: T) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual: as_f64(residual),
            })
        }
    }

    pub(crate) fn require_unitary(&self, tol: T) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                residual: as_f64(residual),
            })
        }
    }
}

impl<T: Real> Mat2<T> {
    pub fn det(&self) -> Complex<T> {
        let r = &self.rows;
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
    }
}

impl<T: Real> Mat4<T> {
    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Complex<T> {
        let r = &self.rows;
        let minor3 = |skip: usize| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            let m = |i: usize, j: usize| r[i + 1][cols[j]];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        };
        (0..4).fold(Complex::zero(), |acc, j| {
            let term = r[0][j] * minor3(j);
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }
}

impl<T, const N: usize> Index<(usize, usize)> for SquareMat<T, N> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.rows[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for SquareMat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.rows[i][j]
    }
}

impl<T: Real, const N: usize> Add for SquareMat<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j] + rhs.rows[i][j])
    }
}

impl<T: Real, const N: usize> Sub for SquareMat<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j] - rhs.rows[i][j])
    }
}

impl<T: Real, const N: usize> Neg for SquareMat<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.rows[i][j])
    }
}

impl<T: Real, const N: usize> Mul for SquareMat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| {
            (0..N).fold(Complex::zero(), |acc, k| acc + self.rows[i][k] * rhs.rows[k][j])
        })
    }
}

impl<T: Real, const N: usize> Mul<Complex<T>> for SquareMat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Complex<T>) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real, const N: usize> Mul<T> for SquareMat<T, N> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(Complex::new(rhs, T::zero()))
    }
}

// JSON layout: {"rows": [[[re, im], ...], ...]}
#[derive(Serialize, Deserialize)]
struct RowsRepr<T> {
    rows: Vec<Vec<[T; 2]>>,
}

impl<T: Real + Serialize, const N: usize> Serialize for SquareMat<T, N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RowsRepr {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>, const N: usize> Deserialize<'de> for SquareMat<T, N> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RowsRepr::<T>::deserialize(deserializer)?;
        if repr.rows.len() != N || repr.rows.iter().any(|r| r.len() != N) {
            return Err(D::Error::custom(format!("expected a {N}x{N} matrix")));
        }
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| Complex::new(repr.rows[i][j][0], repr.rows[i][j][1]))
        });
        Self::new(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn rejects_non_finite_entries() {
        let mut rows = [[Complex::new(0.0f64, 0.0); 2]; 2];
        rows[1][0] = Complex::new(f64::NAN, 0.0);
        assert_eq!(Mat2::new(rows), Err(Error::NonFinite));
        rows[1][0] = Complex::new(0.0, f64::INFINITY);
        assert_eq!(Mat2::new(rows), Err(Error::NonFinite));
    }

    #[test]
    fn det4_of_diagonal_and_permutation() {
        let d = Mat4::<f64>::diag([1.0, 2.0, 3.0, 4.0]);
        assert!((d.det() - cplx(24.0, 0.0)).norm() < 1e-14);
        // one transposition flips the sign
        let p = Mat4::<f64>::from_fn(|i, j| {
            let target = match i {
                0 => 1,
                1 => 0,
                k => k,
            };
            if j == target {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        assert!((p.det() + cplx(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn adjoint_of_product_reverses_order() {
        let a = Mat2::<f64>::new([[cplx(1.0, 2.0), cplx(0.0, -1.0)], [cplx(3.0, 0.5), cplx(-2.0, 0.0)]])
            .unwrap();
        let b = Mat2::<f64>::new([[cplx(0.3, 0.0), cplx(1.0, 1.0)], [cplx(0.0, 2.0), cplx(1.5, -0.5)]])
            .unwrap();
        assert!((a * b).adjoint().max_diff(&(b.adjoint() * a.adjoint())) < 1e-14);
    }

    #[test]
    fn json_layout_is_rows_of_pairs() {
        let m = Mat2::<f64>::new([[cplx(1.0, 0.0), cplx(0.0, -0.5)], [cplx(0.0, 0.5), cplx(0.25, 0.0)]])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":[[[1.0,0.0],[0.0,-0.5]],[[0.0,0.5],[0.25,0.0]]]}"#);
        let back: Mat2<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Mat4<f64>>(&s).is_err());
    }
}
