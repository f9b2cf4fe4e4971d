use std::path::PathBuf;
use std::process::ExitCode;

/// Failure modes with their process exit codes: domain/validation errors
/// exit 1, anything about getting bytes in or out exits 2.
#[derive(Debug)]
pub enum CliError {
    Domain(diffusim::Error),
    Invalid(String),
    Io { path: PathBuf, source: std::io::Error },
    Csv { path: PathBuf, line: usize, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) | CliError::Invalid(_) => ExitCode::from(1),
            CliError::Io { .. } | CliError::Csv { .. } => ExitCode::from(2),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Invalid(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Csv { path, line, msg } => {
                write!(f, "{}:{line}: {msg}", path.display())
            }
        }
    }
}

impl From<diffusim::Error> for CliError {
    fn from(e: diffusim::Error) -> Self {
        CliError::Domain(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
