use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),

    #[error("algebra shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("element is not positive (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("singular {what} (smallest singular value {min_sv:e}, threshold {threshold:e})")]
    Singular {
        what: &'static str,
        min_sv: f64,
        threshold: f64,
    },

    #[error("operator is not self-adjoint (‖T - T*‖ = {defect:e})")]
    NotSelfAdjoint { defect: f64 },

    #[error("sequence is not a frame (lower bound {lower:e}, upper bound {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("not a modular Riesz basis: {0}")]
    NotRiesz(String),

    #[error("diagonal symbol entry {index} is not central")]
    NotCentral { index: usize },

    #[error("sequences are not a dual pair (‖T_X^* T_Xd - Id‖ = {residual:e})")]
    NotDualPair { residual: f64 },

    #[error("reconstruction failed: residual {residual:e} exceeds {tolerance:e}")]
    Reconstruction { residual: f64, tolerance: f64 },

    #[error("operation requires X = Y")]
    SequencesDiffer,
}
