use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("differential does not square to zero in degree {degree}")]
    NotAComplex { degree: i64 },

    #[error("map does not commute with the differentials in degree {degree}")]
    NotAChainMap { degree: i64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("unsolvable linear system: {0}")]
    Unsolvable(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
