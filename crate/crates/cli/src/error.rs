use std::fmt;
use std::path::PathBuf;

use faa_core::FaaError;

/// Failure of a subcommand, carrying the exit-code class.
#[derive(Debug)]
pub enum CliError {
    Core(FaaError),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Config(String),
    Shape(String),
}

impl CliError {
    /// 2 for I/O, 3 for shape or precondition violations, 4 for configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_io() => 2,
            CliError::Core(e) if e.is_config() => 4,
            CliError::Core(_) => 3,
            CliError::Io { .. } => 2,
            CliError::Config(_) => 4,
            CliError::Shape(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Shape(m) => write!(f, "{m}"),
        }
    }
}

impl From<FaaError> for CliError {
    fn from(e: FaaError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
