use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error(transparent)]
    Core(opkz::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<opkz::Error> for CliError {
    fn from(e: opkz::Error) -> CliError {
        use opkz::Error as E;
        match e {
            E::ResourceCap(m) => CliError::ResourceCap(m),
            E::Verification(_) | E::NotAComplex { .. } | E::NotAChainMap { .. } | E::Unsolvable(_) => {
                CliError::Verification(e.to_string())
            }
            E::Invalid(m) | E::Parse(m) => CliError::Usage(m),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 3,
            CliError::ResourceCap(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
