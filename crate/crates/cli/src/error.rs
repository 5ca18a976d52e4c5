//! CLI error classes and their exit codes: 1 usage, 2 data, 3 degenerate
//! statistics.

use std::fmt;

use modeval::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Degenerate(msg) => write!(f, "degenerate statistics: {msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        fn classify(err: &CoreError) -> i32 {
            match err {
                CoreError::UnknownLearner(_)
                | CoreError::Hyperparameter(_)
                | CoreError::InvalidArgument(_) => 1,
                CoreError::LengthMismatch { .. }
                | CoreError::EmptyInput(_)
                | CoreError::Stratification { .. }
                | CoreError::InvalidPlan(_) => 2,
                CoreError::Degenerate(_) => 3,
                CoreError::Fold { source, .. } => classify(source),
            }
        }
        let text = err.to_string();
        match classify(&err) {
            1 => CliError::Usage(text),
            3 => CliError::Degenerate(text),
            _ => CliError::Data(text),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
