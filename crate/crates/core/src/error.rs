use core::fmt;

/// Errors shared across the coding, analytics, and optimization modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimensions do not admit the requested operation.
    ShapeError { expected: (usize, usize), got: (usize, usize) },
    /// Multiplicative inverse of zero requested.
    DivisionByZero,
    /// Decoding finished with fewer than k innovative packets.
    DecodeIncomplete { rank: usize, target: usize },
    /// Re-encoding matrix references a packet the relay never received.
    ConsistencyError { slot: usize },
    /// Scenario or parameter combination is not valid.
    ConfigError(&'static str),
    /// Argument outside the documented domain of a formula.
    DomainError(&'static str),
    /// No candidate block length satisfies the complexity budget.
    InfeasibleBudget { beta0: u64, min_required: u64 },
    /// Lifecycle event not declared for the current state.
    InvalidTransition,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeError { expected, got } => {
                write!(f, "shape mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            Error::DivisionByZero => write!(f, "inverse of zero in GF(2^q)"),
            Error::DecodeIncomplete { rank, target } => {
                write!(f, "decode incomplete: rank {rank} of {target}")
            }
            Error::ConsistencyError { slot } => {
                write!(f, "re-encode matrix references missing packet in slot {slot}")
            }
            Error::ConfigError(msg) => write!(f, "invalid configuration: {msg}"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::InfeasibleBudget { beta0, min_required } => {
                write!(f, "complexity budget {beta0} below minimum {min_required}")
            }
            Error::InvalidTransition => write!(f, "invalid lifecycle transition"),
        }
    }
}

impl core::error::Error for Error {}
