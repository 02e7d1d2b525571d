use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("mode index {index} out of range for {num_modes} modes")]
    ModeOutOfRange { index: usize, num_modes: usize },
    #[error("gate targets must be distinct (got {0} twice)")]
    DuplicateTarget(usize),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("operator has complex coefficients")]
    ComplexCoefficients,
    #[error("{what}: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("channel is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::QubitOutOfRange { .. } => "qubit_out_of_range",
            Error::ModeOutOfRange { .. } => "mode_out_of_range",
            Error::DuplicateTarget(_) => "duplicate_target",
            Error::NotUnitary(_) => "not_unitary",
            Error::NotHermitian => "not_hermitian",
            Error::ComplexCoefficients => "complex_coefficients",
            Error::TooLarge { .. } => "too_large",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse_error",
            Error::NotTracePreserving(_) => "not_trace_preserving",
            Error::DegenerateFit(_) => "degenerate_fit",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
