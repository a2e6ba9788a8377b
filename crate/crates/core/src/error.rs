use thiserror::Error;

/// Errors raised by the library. Residuals are reported as `f64` regardless
/// of the working scalar so the type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite entry (NaN or infinity) in input")]
    NonFinite,
    #[error("matrix is not Hermitian (max |M - M*| = {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not unitary (max |U*U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("vector is not a unit vector (norm = {norm})")]
    NotUnitVector { norm: f64 },
    #[error("map is not in the face F(xi, eta): |phi(P_xi) eta| = {residual:.3e}")]
    NotInFace { residual: f64 },
    #[error("matrix is not in canonical face form: {reason} (residual {residual:.3e})")]
    NotCanonicalForm { reason: String, residual: f64 },
    #[error("invalid extremal parameters: {0}")]
    InvalidParams(String),
    #[error("not an extremal unital map in canonical form: {0}")]
    NotExtremal(String),
    #[error("decomposition hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("matrix is not one of the degenerate extremal cases")]
    NotDegenerate,
    #[error("epsilon {eps} too large: {reason}")]
    EpsilonTooLarge { eps: f64, reason: String },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
