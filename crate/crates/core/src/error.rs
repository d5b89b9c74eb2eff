use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("unsupported graph {graph}: {reason}")]
    UnsupportedGraph { graph: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("character is not normalized: ω(χ) = {actual}, expected {expected}")]
    NotNormalized { actual: String, expected: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix {index} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { index: usize, deviation: f64 },

    #[error("invalid functor word {0:?}: only 'S' and 'T' are allowed")]
    InvalidWord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
