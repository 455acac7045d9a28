use core::fmt;

/// Errors raised by the enumeration, constants and limit-law routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Halving met an odd coefficient; an upstream combination is wrong.
    OddCoefficient { index: usize },
    /// A count table does not cover the requested size or height.
    InsufficientTable { needed_n: usize, needed_h: usize },
    /// Exhaustive enumeration was asked for a size above its guard.
    TooLarge { n: usize, limit: usize },
    /// Argument outside the domain where the certified bounds hold.
    DomainError(&'static str),
    /// The requested accuracy cannot be certified with the available terms.
    ToleranceUnreachable { requested: f64, achieved: f64 },
    /// Cancellation in a theta sum would exceed the requested accuracy.
    AccuracyLoss { x: f64, error_estimate: f64 },
    /// Height outside `1..n` for a deviation bound.
    DegenerateRange { n: usize, h: usize },
    /// A precondition on an integer parameter was violated.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OddCoefficient { index } => {
                write!(f, "odd coefficient at degree {index}, cannot halve exactly")
            }
            Error::InsufficientTable { needed_n, needed_h } => {
                write!(f, "count table too small: need n >= {needed_n}, h >= {needed_h}")
            }
            Error::TooLarge { n, limit } => {
                write!(f, "exhaustive enumeration limited to n <= {limit}, got {n}")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::ToleranceUnreachable { requested, achieved } => write!(
                f,
                "tolerance {requested:e} unreachable (best certified error {achieved:e})"
            ),
            Error::AccuracyLoss { x, error_estimate } => write!(
                f,
                "accuracy loss at x = {x}: cancellation error estimate {error_estimate:e}"
            ),
            Error::DegenerateRange { n, h } => {
                write!(f, "height {h} outside 1..{n}: probability is degenerate")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
