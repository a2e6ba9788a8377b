//! Complex linear algebra for the fixed 2×2 and 4×4 shapes.

mod eigen;
mod matrix;
mod unitary;

pub use eigen::{
    eigenvalues2, hermitian_eigen, psd_check, rank_estimate, singular_values, HermitianEigen,
    JACOBI_MAX_SWEEPS, JACOBI_THRESHOLD,
};
pub use matrix::{Mat2, Mat4, SquareMat};
pub use unitary::{complete_to_unitary, Column, UNIT_VECTOR_TOL};

use num_complex::Complex;

use crate::scalar::Real;

/// Default relative threshold for [`rank_estimate`].
pub const RANK_TOL: f64 = 1e-9;

pub fn basis2<T: Real>(k: usize) -> [Complex<T>; 2] {
    std::array::from_fn(|i| {
        if i == k {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}
