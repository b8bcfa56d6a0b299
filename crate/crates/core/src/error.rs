use thiserror::Error;

/// Errors raised by the distillation engine and its algebra.
#[derive(Debug, Error)]
pub enum Error {
    #[error("d must be prime, got {0}")]
    NotPrime(u32),

    #[error("{0} has no multiplicative inverse modulo {1}")]
    NoInverse(u32, u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid stabilizer generator: {0}")]
    InvalidGenerator(String),

    #[error("block {index} is not unitary (residual {residual:e})")]
    InvalidBlock { index: usize, residual: f64 },

    #[error("conjugated error does not factor into codespace blocks (residual {residual:e})")]
    StructureViolation { residual: f64 },

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("correction coset lies in syndrome class {coset}, expected {expected}")]
    CosetMismatch { coset: u32, expected: u32 },

    #[error("post-selected outcome has zero probability")]
    ImpossiblePostselection,

    #[error("every syndrome class has zero probability")]
    DegenerateInput,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
