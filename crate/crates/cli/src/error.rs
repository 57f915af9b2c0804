use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid instance: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] chipfire_core::Error),
}

impl CliError {
    /// 1 when a computation contradicted an identity it was checking,
    /// 2 for anything wrong with the input or flags.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(chipfire_core::Error::AbelianViolation(_))
            | CliError::Core(chipfire_core::Error::DualityViolation { .. }) => 1,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
