use thiserror::Error;

/// Errors raised by the parafermion modular-data routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level must be an integer k >= 2, got {0}")]
    InvalidLevel(i64),

    #[error("label ({m},{n}) is out of range for level {k}")]
    InvalidLabel { k: u32, m: i64, n: i64 },

    #[error("affine label {i} is out of range for level {k}")]
    InvalidAffineLabel { k: u32, i: i64 },

    #[error("label ({m},{n}) is not canonical at level {k}; canonicalize it first")]
    NotCanonical { k: u32, m: u32, n: u32 },

    #[error("S-matrix unitarity residual {residual:e} exceeds tolerance {tolerance:e}")]
    UnitarityViolation { residual: f64, tolerance: f64 },

    #[error("fitted S-matrix normalization {kappa} deviates from 2 by more than {tolerance:e}")]
    Normalization { kappa: f64, tolerance: f64 },

    #[error("fusion index 2i'-i+2j'-j+c = {value} is odd")]
    FusionParity { value: i64 },

    #[error("label ({m},{n}) has {count} dual partners in the fusion table, expected exactly one")]
    Duality { m: u32, n: u32, count: usize },

    #[error("Verlinde coefficient {raw} has rounding residual {residual:e} >= {tolerance:e}")]
    RoundingResidual {
        raw: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("series division failed: {0}")]
    DivisionFailure(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("insufficient truncation: tail {tail:e} exceeds 1% of |numerator| = {numerator:e}")]
    InsufficientTruncation { tail: f64, numerator: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
