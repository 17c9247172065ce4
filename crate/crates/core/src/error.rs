use alloc::string::String;

/// Errors raised by the analysis chain.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("row {row} has zero variance")]
    ZeroVarianceRow { row: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("insufficient history: time {time} precedes the first full window of length {window}")]
    InsufficientHistory { time: usize, window: usize },

    #[error("{0} has zero trace")]
    ZeroTrace(&'static str),

    #[error("eigenvalue iteration failed to converge for a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("signal schedule for `{factor}` is invalid: {reason}")]
    Schedule { factor: String, reason: String },

    #[error("unknown scenario case {0} (expected 1..=4)")]
    UnknownCase(u32),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
