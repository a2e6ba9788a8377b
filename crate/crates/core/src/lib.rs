//! Positive linear maps `M₂(ℂ) → M₂(ℂ)`.
//!
//! Maps are represented by their Choi matrices ([`ChoiMat`]). The crate
//! certifies positivity, complete positivity and complete copositivity,
//! builds the canonical extremal unital positive maps, and splits such a map
//! into a completely positive part plus a completely copositive part in
//! closed form ([`decompose_extremal`]), together with a numerical search
//! over all such splits ([`uniqueness_search`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.
//!
//! ```
//! use posmap_core::{decompose_extremal, example_family, verify_decomposition};
//!
//! let h = example_family(0.5_f64).unwrap();
//! let pair = decompose_extremal(&h, 1e-10).unwrap();
//! assert!(verify_decomposition(&h, &pair, 1e-10).is_pass());
//! ```

pub mod certificate;
pub mod certify;
pub mod choi;
pub mod decompose;
mod error;
pub mod extremal;
pub mod linalg;
mod scalar;
pub mod uniqueness;

pub use certificate::{Certificate, Check, Verdict, Witness};
pub use certify::{
    block_positive, canonical_ccp_conditions, canonical_cp_conditions, ccp_check, cp_check,
    face_form_inequalities, face_membership, BlochGrid, FaceCoefficients,
};
pub use choi::{canonicalize, matrix_unit, ChoiMat, FaceFrame};
pub use decompose::{decompose_extremal, kraus_operators, verify_decomposition, DecompositionPair};
pub use error::{Error, Result};
pub use extremal::{
    build_extremal, degenerate_case, example_family, validate_extremal, Branch, DegenerateCase,
    ExtremalParams,
};
pub use linalg::{complete_to_unitary, psd_check, rank_estimate, Column, Mat2, Mat4, SquareMat};
pub use scalar::{lit, principal_sqrt, Real};
pub use uniqueness::{
    epsilon_family, feasibility, uniqueness_search, FeasibilityReport, SearchConfig,
    SplitCandidate,
};

pub use num_complex::{Complex, Complex32, Complex64};

pub type Mat2f64 = Mat2<f64>;
pub type Mat4f64 = Mat4<f64>;
pub type Mat2f32 = Mat2<f32>;
pub type Mat4f32 = Mat4<f32>;
pub type ChoiMat64 = ChoiMat<f64>;
pub type ChoiMat32 = ChoiMat<f32>;
pub type Certificate64 = Certificate<f64>;
pub type ExtremalParams64 = ExtremalParams<f64>;
pub type DecompositionPair64 = DecompositionPair<f64>;
pub type SplitCandidate64 = SplitCandidate<f64>;
pub type FeasibilityReport64 = FeasibilityReport<f64>;
