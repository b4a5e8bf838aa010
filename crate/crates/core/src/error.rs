use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unphysical coherence vector: |S| = {norm} exceeds 1 + {tolerance}")]
    UnphysicalBlochVector { norm: f64, tolerance: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("cannot normalize a pulse with zero area")]
    ZeroArea,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("grid mismatch between quadrature stages")]
    GridMismatch,

    #[error("unsupported nested integral depth {0} (expected 2 or 3)")]
    UnsupportedDepth(usize),

    #[error("oracle resolution {0} is below the minimum of 8 nodes")]
    ResolutionTooLow(usize),

    #[error("unsupported Magnus order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(u32),

    #[error("Sylvester formula needs distinct eigenvalues; ξ = {0:e}")]
    DegenerateSpectrum(f64),

    #[error("exponent is not skew-symmetric (max |G + Gᵀ| = {0:e})")]
    NotSkewSymmetric(f64),
}
