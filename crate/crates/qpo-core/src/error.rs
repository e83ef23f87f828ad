use std::fmt;

/// Errors surfaced by construction, evaluation, and verification routines.
///
/// Variants are grouped by what the caller can do about them: `Domain` and
/// `Parameter` indicate bad inputs to a single call, `Config` indicates a
/// malformed experiment description, `Infeasible` means the requested object
/// cannot exist for the given data, `Numeric` reports a quantity that left the
/// representable range mid-computation, and `Singularity` flags evaluation at
/// a point where the target function is undefined.
#[derive(Debug, Clone, PartialEq)]
pub enum QpoError {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A structural parameter (order bounds, tolerances, sizes) is invalid.
    Parameter(String),
    /// An experiment configuration file or value could not be used.
    Config(String),
    /// The requested construction has no solution for the supplied data.
    Infeasible(String),
    /// A computed quantity overflowed, underflowed, or lost all precision.
    Numeric(String),
    /// Evaluation was requested exactly at a non-removable singularity.
    Singularity(String),
    /// An I/O operation failed (file read/write during runs or exports).
    Io(String),
}

impl fmt::Display for QpoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QpoError::Domain(msg) => write!(f, "domain error: {msg}"),
            QpoError::Parameter(msg) => write!(f, "parameter error: {msg}"),
            QpoError::Config(msg) => write!(f, "config error: {msg}"),
            QpoError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            QpoError::Numeric(msg) => write!(f, "numeric error: {msg}"),
            QpoError::Singularity(msg) => write!(f, "singularity: {msg}"),
            QpoError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for QpoError {}

impl From<std::io::Error> for QpoError {
    fn from(e: std::io::Error) -> Self {
        QpoError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for QpoError {
    fn from(e: serde_json::Error) -> Self {
        QpoError::Config(e.to_string())
    }
}
