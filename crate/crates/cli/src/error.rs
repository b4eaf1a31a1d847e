use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version`; the payload is the text to print.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error(transparent)]
    Numeric(#[from] pulsekick_core::Error),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::ConfigParse(_) => 2,
            CliError::Numeric(_) | CliError::Runtime(_) | CliError::Io(_) => 1,
        }
    }
}
