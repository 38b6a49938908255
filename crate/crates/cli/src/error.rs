use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or region/check combination.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qd_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qd_core::Error::Budget { .. }) | CliError::Core(qd_core::Error::Overflow(_)) => 3,
            _ => 2,
        }
    }
}
