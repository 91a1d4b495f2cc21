use thiserror::Error;

#[derive(Debug, Error)]
pub enum WbError {
    #[error(transparent)]
    Core(#[from] spg_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(#[from] toml::de::Error),
}

impl WbError {
    /// Process exit code: 2 for internal invariant failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            WbError::Core(spg_core::Error::Invariant(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, WbError>;
