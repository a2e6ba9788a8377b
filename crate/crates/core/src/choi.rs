//! Choi-matrix representation of linear maps `M₂(ℂ) → M₂(ℂ)`.
//!
//! A map `φ` is stored as the 4×4 matrix whose 2×2 block `(i, j)` is
//! `φ(E_ij)`, occupying rows `2i..2i+2` and columns `2j..2j+2`.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{basis2, complete_to_unitary, Column, Mat2, Mat4};
use crate::scalar::{as_f64, Real};

/// Choi matrix `H_φ = [φ(E_ij)]` of a linear map on `M₂(ℂ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ChoiMat<T: Real>(Mat4<T>);

impl<T: Real> ChoiMat<T> {
    pub fn from_mat4(m: Mat4<T>) -> Self {
        Self(m)
    }

    pub fn as_mat4(&self) -> &Mat4<T> {
        &self.0
    }

    pub fn into_mat4(self) -> Mat4<T> {
        self.0
    }

    /// Assembles the Choi matrix from the images `φ(E_ij)` of the matrix units.
    pub fn from_blocks(blocks: [[Mat2<T>; 2]; 2]) -> Self {
        Self(Mat4::from_fn(|r, c| blocks[r / 2][c / 2][(r % 2, c % 2)]))
    }

    /// Choi matrix of the map given as a closure.
    pub fn from_action(phi: impl Fn(&Mat2<T>) -> Mat2<T>) -> Self {
        Self::from_blocks(std::array::from_fn(|i| {
            std::array::from_fn(|j| phi(&matrix_unit(i, j)))
        }))
    }

    /// Block `(i, j)`, i.e. `φ(E_ij)`.
    pub fn block(&self, i: usize, j: usize) -> Mat2<T> {
        Mat2::from_fn(|r, c| self.0[(2 * i + r, 2 * j + c)])
    }

    pub fn blocks(&self) -> [[Mat2<T>; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.block(i, j)))
    }

    /// `φ(A) = Σ A_ij φ(E_ij)`.
    pub fn apply(&self, a: &Mat2<T>) -> Mat2<T> {
        let mut out = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                if !a[(i, j)].is_zero() {
                    out = out + self.block(i, j) * a[(i, j)];
                }
            }
        }
        out
    }

    /// Block-index swap `[H_ij] ↦ [H_ji]`; the Choi matrix of `φ ∘ transpose`.
    pub fn partial_transpose(&self) -> Self {
        let b = self.blocks();
        Self::from_blocks([[b[0][0], b[1][0]], [b[0][1], b[1][1]]])
    }

    /// Choi matrix of `A ↦ V* φ(W A W*) V`.
    pub fn conjugate(&self, v: &Mat2<T>, w: &Mat2<T>, tol: T) -> Result<Self> {
        v.require_unitary(tol)?;
        w.require_unitary(tol)?;
        Ok(self.conjugate_unchecked(v, w))
    }

    pub(crate) fn conjugate_unchecked(&self, v: &Mat2<T>, w: &Mat2<T>) -> Self {
        let (v_adj, w_adj) = (v.adjoint(), w.adjoint());
        Self::from_action(|a| v_adj * self.apply(&(*w * *a * w_adj)) * *v)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.0.is_hermitian(tol)
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.0.max_diff(&other.0)
    }

    /// Choi matrix of the identity map.
    pub fn identity_map() -> Self {
        Self::from_action(|a| *a)
    }

    /// Choi matrix of the transpose map.
    pub fn transpose_map() -> Self {
        Self::from_action(|a| a.transpose())
    }

    /// `‖φ(P_ξ) η‖`: zero exactly when the map lies in the face `F_{ξ,η}`.
    pub fn face_residual(&self, xi: &[Complex<T>; 2], eta: &[Complex<T>; 2]) -> T {
        let n2 = xi[0].norm_sqr() + xi[1].norm_sqr();
        let p_xi = Mat2::outer(xi, xi) * (T::one() / n2);
        let out = self.apply(&p_xi).mul_vec(eta);
        (out[0].norm_sqr() + out[1].norm_sqr()).sqrt()
    }
}

impl<T: Real> std::ops::Add for ChoiMat<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<T: Real> std::ops::Sub for ChoiMat<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ChoiMat<T> {
    type Output = Complex<T>;
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.0[idx]
    }
}

/// Matrix unit `E_ij`.
pub fn matrix_unit<T: Real>(i: usize, j: usize) -> Mat2<T> {
    Mat2::outer(&basis2(i), &basis2(j))
}

/// Unitary frame `(V, W)` with `W e₂ = ξ` and `V e₁ = η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct FaceFrame<T: Real> {
    pub xi: [Complex<T>; 2],
    pub eta: [Complex<T>; 2],
    pub w: Mat2<T>,
    pub v: Mat2<T>,
}

impl<T: Real> FaceFrame<T> {
    /// Builds the frame with the [`complete_to_unitary`] phase convention.
    pub fn new(xi: [Complex<T>; 2], eta: [Complex<T>; 2]) -> Result<Self> {
        Ok(Self {
            xi,
            eta,
            w: complete_to_unitary(xi, Column::Second)?,
            v: complete_to_unitary(eta, Column::First)?,
        })
    }

    pub fn standard() -> Self {
        Self {
            xi: basis2(1),
            eta: basis2(0),
            w: Mat2::identity(),
            v: Mat2::identity(),
        }
    }
}

/// Rotates a map lying in `F_{ξ,η}` into the frame where its Choi matrix has
/// block (2,2) proportional to `E₂₂` and a zero `(1,1)` entry in block (1,2).
pub fn canonicalize<T: Real>(
    h: &ChoiMat<T>,
    xi: [Complex<T>; 2],
    eta: [Complex<T>; 2],
    tol: T,
) -> Result<(ChoiMat<T>, FaceFrame<T>)> {
    let frame = FaceFrame::new(xi, eta)?;
    let residual = h.face_residual(&xi, &eta);
    if residual > tol {
        return Err(Error::NotInFace {
            residual: as_f64(residual),
        });
    }
    Ok((h.conjugate_unchecked(&frame.v, &frame.w), frame))
}
