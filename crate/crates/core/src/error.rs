//! Error types shared across the crate.

use std::fmt;

/// Failure modes of library operations.
///
/// `Refused` is the certification trust boundary: a violated precondition
/// yields a refusal carrying a witness point, never a silently wrong
/// certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Dimension of an argument does not match the ambient space.
    DimMismatch { expected: usize, got: usize },
    /// Malformed or out-of-contract input (message explains which contract).
    Input(String),
    /// A sampled precondition was violated; the witness is the offending
    /// point (flattened coordinates) and `detail` names the precondition.
    Refused { detail: String, witness: Vec<f64> },
    /// Operation would exceed a resource cap (e.g. hypercube vertex count).
    Resource(String),
    /// Endpoints of an order interval are incomparable (empty interval).
    IncomparableEndpoints,
    /// The chosen direction is annihilated by the seminorm; slope ratios are
    /// undefined and the caller must use the degenerate-direction argument.
    DegenerateDirection,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Refused { detail, witness } => {
                write!(f, "certification refused: {detail}; witness {witness:?}")
            }
            Error::Resource(msg) => write!(f, "resource limit: {msg}"),
            Error::IncomparableEndpoints => {
                write!(f, "order interval is empty: endpoints are incomparable")
            }
            Error::DegenerateDirection => {
                write!(f, "degenerate direction: the seminorm vanishes on it")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
