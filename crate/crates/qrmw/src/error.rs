//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("address out of range: channel {lambda}, row {y}, column {x}")]
    AddressOutOfRange { lambda: u64, y: u64, x: u64 },

    #[error("color value {value} exceeds maximum {max} for the configured bit depth")]
    ColorOutOfRange { value: u64, max: u64 },

    #[error("operands have mismatched geometry")]
    GeometryMismatch,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("value count mismatch: expected {expected}, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("{qubits} qubits exceed the simulator cap of {cap}")]
    QubitCapExceeded { qubits: usize, cap: usize },

    #[error("measurement register is empty")]
    EmptyRegister,

    #[error("operator mask selects no qubits")]
    EmptyMask,

    #[error("invalid operator spec: {0}")]
    InvalidOperatorSpec(String),

    #[error("ppm: {0}")]
    Ppm(String),

    #[error("compression ratio undefined for zero ops_before")]
    EmptyCompressionBaseline,
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
