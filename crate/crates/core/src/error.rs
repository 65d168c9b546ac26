use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial division by zero")]
    DivisionByZero,

    #[error("division is not exact, remainder {0}")]
    InexactDivision(String),

    #[error("expected integer coefficients, got {0}")]
    NonIntegral(String),

    #[error("table has no entry for degree {0}")]
    MissingEntry(u32),

    #[error("table entry for degree {0} was filled with two different values")]
    InconsistentFill(u32),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("there are no stable trees with m = {m} marked leaves and degree {d}")]
    NoStableTrees { m: u32, d: u32 },

    #[error("invalid 2-partition: {0}")]
    InvalidPartition(String),

    #[error("family is not good: {0}")]
    NotGood(String),

    #[error("reconstructed tree is unstable: {0}")]
    Unstable(String),

    #[error("Poincaré polynomial has degree {found:?}, expected {expected}")]
    DimensionMismatch { expected: u32, found: Option<usize> },

    #[error("request exceeds tractability guard: {0}")]
    Intractable(String),
}
