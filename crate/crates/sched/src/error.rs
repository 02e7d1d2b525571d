use std::fmt;

use serde::Serialize;

/// One validation failure, located by a JSON-style path such as `jobs[3].project`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SchedError {
    #[error("invalid scenario: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Issue>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("job {job} needs {need} qubits but device `{device}` has {have}")]
    QubitsExceeded {
        job: u64,
        device: String,
        need: u32,
        have: u32,
    },
    #[error("device `{0}` is not a QPU")]
    NotQpu(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("calibration design is degenerate: {0}")]
    Degenerate(String),
}

impl SchedError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            SchedError::Invalid(_) => "invalid_scenario",
            SchedError::Parse(_) => "parse_error",
            SchedError::QubitsExceeded { .. } => "qubits_exceeded",
            SchedError::NotQpu(_) => "not_a_qpu",
            SchedError::InvalidArgument(_) => "invalid_argument",
            SchedError::Degenerate(_) => "degenerate_fit",
        }
    }
}

pub type Result<T> = std::result::Result<T, SchedError>;
