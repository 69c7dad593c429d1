use thiserror::Error;

/// Failures that stop a command before any report is produced; all map to
/// exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Json { source_name: String, line: usize, column: usize, message: String },
    #[error("{source_name}: {message}")]
    Input { source_name: String, message: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("engine error: {0}")]
    Engine(sympidx::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<sympidx::Error> for CliError {
    fn from(e: sympidx::Error) -> Self {
        match e {
            sympidx::Error::Precondition(msg) => CliError::Precondition(msg),
            other => CliError::Engine(other),
        }
    }
}
