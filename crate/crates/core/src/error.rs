use thiserror::Error;

/// Errors raised by the effective-Hamiltonian toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("cannot order pieces {first} and {second}: {detail}")]
    Construction {
        first: usize,
        second: usize,
        detail: String,
    },

    #[error("grid too small: {points} points per dimension, need at least {min}")]
    GridTooSmall { points: usize, min: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical instability at t = {time}")]
    Instability { time: f64 },

    #[error("unsupported kind: {0}")]
    WrongKind(String),

    #[error("p-grid mismatch: {0}")]
    PGridMismatch(String),

    #[error("p-grid is not symmetric about the origin")]
    AsymmetricGrid,

    #[error("piece count mismatch: expected {expected}, got {got}")]
    PieceCount { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
