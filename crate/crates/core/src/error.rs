use thiserror::Error;

/// Failure class, used by the command-line front end to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad configuration or hyperparameters (exit 1).
    Config,
    /// Bad input data, schema mismatches, malformed files (exit 2).
    Data,
    /// Internal invariant failure (exit 3).
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("model file error: {0}")]
    ModelFormat(String),

    #[error("search space has {computed} states, above the ceiling of {ceiling}")]
    SearchSpaceTooLarge { computed: u128, ceiling: u128 },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::SearchSpaceTooLarge { .. } => ErrorClass::Config,
            Error::SchemaMismatch(_)
            | Error::InvalidRule(_)
            | Error::Data(_)
            | Error::ModelFormat(_)
            | Error::Io(_) => ErrorClass::Data,
            Error::Internal(_) => ErrorClass::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
