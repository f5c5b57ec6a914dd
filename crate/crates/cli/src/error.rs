use std::path::PathBuf;

/// Exit status for input that could not be parsed or validated.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit status for model mismatches and numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("{0}")]
    Numerical(#[from] netdyn_core::Error),
    #[error("spanning-tree enumeration capped: {count} trees exceed the cap of {cap}; the determinantal tree-weight sum is {determinant} (raise --cap or NETDYN_CAP to enumerate)")]
    CapExceeded {
        count: u128,
        cap: u128,
        determinant: String,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed trajectory file: {0}")]
    Trajectory(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Validation(_)
            | CliError::Usage(_)
            | CliError::Trajectory(_) => EXIT_VALIDATION,
            CliError::ModelMismatch(_)
            | CliError::Numerical(_)
            | CliError::CapExceeded { .. }
            | CliError::Write { .. } => EXIT_NUMERICAL,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
