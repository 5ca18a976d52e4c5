//! Error type shared by all evaluation and testing routines.

use std::fmt;

/// Errors produced by dataset handling, plan generation, learner fitting,
/// and statistical tests.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain.
    InvalidArgument(String),
    /// Two paired vectors have different lengths.
    LengthMismatch { expected: usize, actual: usize },
    /// An input collection is empty where at least one element is required.
    EmptyInput(&'static str),
    /// The learner name is not registered.
    UnknownLearner(String),
    /// A hyperparameter is missing, unknown, or out of range.
    Hyperparameter(String),
    /// Stratification cannot place a class on both sides of a split.
    Stratification { class: usize, detail: String },
    /// A split or fold plan violates its structural invariants.
    InvalidPlan(String),
    /// A statistic is undefined for the given inputs (zero variance,
    /// no discordant pairs, unanimous rows, single-class training set, ...).
    Degenerate(String),
    /// An evaluation failed inside a specific cross-validation fold.
    Fold { index: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::UnknownLearner(name) => write!(f, "unknown learner: {name:?}"),
            Error::Hyperparameter(msg) => write!(f, "hyperparameter error: {msg}"),
            Error::Stratification { class, detail } => {
                write!(f, "stratification failed for class {class}: {detail}")
            }
            Error::InvalidPlan(msg) => write!(f, "invalid plan: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate: {msg}"),
            Error::Fold { index, source } => write!(f, "fold {index}: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Fold { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
