use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two curves or processes live on grids of different length.
    DimensionMismatch { expected: usize, got: usize },
    /// A grid failed its invariants (endpoints, ordering, weights).
    InvalidGrid(&'static str),
    /// A sample failed its invariants (size, finiteness).
    InvalidSample(&'static str),
    /// A configuration value is out of range.
    InvalidConfig(&'static str),
    /// A split index is outside `[1, n-1]`.
    SplitOutOfRange { k: usize, n: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected} grid points, got {got}")
            }
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidSample(msg) => write!(f, "invalid sample: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            Error::SplitOutOfRange { k, n } => {
                write!(f, "split index {k} out of range [1, {}]", n - 1)
            }
        }
    }
}

impl core::error::Error for Error {}
