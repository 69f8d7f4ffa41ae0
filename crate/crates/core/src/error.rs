use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("invalid shape {rows}x{cols}")]
    InvalidShape { rows: usize, cols: usize },

    #[error("impropriety {0} outside [0, 1]")]
    InvalidImpropriety(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("degree of impropriety reached 1; g(rho) is singular")]
    SingularAtOne,

    #[error("exact SNR gain vanishes at window {0}")]
    DegenerateWindow(usize),

    #[error("quadratic form has imaginary residue {residue:e} relative to value {value:e}")]
    NumericalInconsistency { value: f64, residue: f64 },

    #[error("training diverged at iteration {0}")]
    DivergenceDetected(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
