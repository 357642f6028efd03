use thiserror::Error;

/// Errors raised by the protocol toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("twice-J must satisfy 1 <= 2J <= {max}, got {got}")]
    SpinOutOfRange { got: u32, max: u32 },

    #[error("magnetic number 2M = {two_m} is not in {{-2J, -2J+2, ..., 2J}} for 2J = {two_j}")]
    MagneticOutOfRange { two_j: u32, two_m: i32 },

    #[error("qubits per party N must satisfy 1 <= N <= {max}, got {got}")]
    QubitsOutOfRange { got: u32, max: u32 },

    #[error("repetition count nu must be >= 1")]
    ZeroRepetitions,

    #[error("angular frequency omega must be finite and > 0, got {0}")]
    InvalidOmega(f64),

    #[error("clock offset Y must be finite, got {0}")]
    InvalidOffset(f64),

    #[error("observed mean parity {0} lies outside [-1, 1]")]
    MeanOutOfRange(f64),

    #[error("no measurement records supplied")]
    EmptyRecords,

    #[error("operation requires the {expected} protocol, got {got}")]
    WrongProtocol { expected: &'static str, got: &'static str },

    #[error("|Y| = {abs_offset} lies outside the ambiguity window {window}")]
    OutsideWindow { abs_offset: f64, window: f64 },

    #[error("at least {min} trials required, got {got}")]
    TooFewTrials { got: usize, min: usize },

    #[error("at least {min} points required for a fit, got {got}")]
    TooFewPoints { got: usize, min: usize },

    #[error("state vector on {got} qubits exceeds the {max}-qubit cap")]
    TooManyQubits { got: usize, max: usize },

    #[error("expectation is not strictly monotone on the inversion window for N = {0}")]
    NotMonotone(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
