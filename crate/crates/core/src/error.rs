use thiserror::Error;

/// Errors raised by algebra construction, evaluation and the exterior calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator `{generator}` has no pure-power relation; quotient is not finite-dimensional")]
    NotFiniteDimensional { generator: String },

    #[error("ideal generator #{index} has total degree 0 and would kill the unit")]
    EmptyRelation { index: usize },

    #[error("malformed presentation: {0}")]
    BadPresentation(String),

    #[error("elements belong to different Weil algebras")]
    AlgebraMismatch,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("not an algebra morphism: {0}")]
    NotMorphism(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parse error at byte {position}: {message}")]
    ParseError { position: usize, message: String },

    #[error("unknown symbol `{symbol}` at byte {position}")]
    UnknownSymbol { symbol: String, position: usize },

    #[error("degree error: {0}")]
    DegreeError(String),

    #[error("Poisson structure is not trusted; run the Jacobi check first")]
    Untrusted,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
