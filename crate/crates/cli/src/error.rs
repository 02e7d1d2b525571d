use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

/// Failure reported on stderr as `{"error": {"code", "message", ...}}`.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            details: None,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new("invalid_argument", message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new("io_error", format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> String {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let Some(d) = &self.details {
            body["details"] = d.clone();
        }
        json!({ "error": body }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<qcsc_core::Error> for CliError {
    fn from(e: qcsc_core::Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}

impl From<qcsc_sched::SchedError> for CliError {
    fn from(e: qcsc_sched::SchedError) -> Self {
        let details = match &e {
            qcsc_sched::SchedError::Invalid(issues) => Some(serde_json::to_value(issues).expect("issues serialize")),
            _ => None,
        };
        Self {
            code: e.code(),
            message: e.to_string(),
            details,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new("parse_error", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::new("parse_error", e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
