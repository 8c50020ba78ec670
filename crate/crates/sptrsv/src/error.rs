//! Crate-wide error type.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by matrix construction, file ingestion, scheduling,
/// solving, and benchmarking.
#[derive(Debug)]
pub enum Error {
    /// A structural precondition on an input was violated. The message names
    /// the offending argument and what was expected of it.
    InvalidInput(String),
    /// Grid dimensions (or an entry-count estimate) overflow `usize`.
    DimensionOverflow,
    /// Row `.0` has no stored diagonal entry, or its stored value is exactly
    /// zero. Triangular solves divide by the diagonal, so this is fatal.
    MissingDiagonal(usize),
    /// An entry of a claimed-triangular matrix sits on the wrong side of the
    /// diagonal for the claimed orientation.
    OrientationViolation { row: usize, col: usize },
    /// A file could not be parsed. `line` is 1-based and counts every line of
    /// the file, comments included.
    Parse { line: usize, message: String },
    /// The file declares a format variant the reader does not support
    /// (complex or pattern fields, array format, non-square shapes, ...).
    UnsupportedFormat(String),
    /// Topological level construction made no progress: `emitted` of `total`
    /// unknowns were placed and none of the rest ever became ready. The
    /// dependency pattern contains a cycle (it is not triangular).
    CycleDetected { emitted: usize, total: usize },
    /// A schedule does not cover every unknown of the system it is used with.
    InvalidSchedule { expected: usize, found: usize },
    /// A busy-wait exceeded its budget: the counter of `unknown` never
    /// reached zero. This indicates an inconsistent schedule/counter pair
    /// (or a pathologically oversubscribed machine), never a normal outcome.
    SpinTimeout { unknown: usize },
    /// A measured interval must be strictly positive to convert work into a
    /// rate.
    NonpositiveTime,
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionOverflow => write!(f, "grid dimensions overflow the address space"),
            Error::MissingDiagonal(i) => {
                write!(f, "row {i} has no nonzero diagonal entry")
            }
            Error::OrientationViolation { row, col } => write!(
                f,
                "entry ({row}, {col}) lies on the wrong side of the diagonal for the claimed orientation"
            ),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::UnsupportedFormat(what) => write!(f, "unsupported format: {what}"),
            Error::CycleDetected { emitted, total } => write!(
                f,
                "dependency cycle: only {emitted} of {total} unknowns could be ordered"
            ),
            Error::InvalidSchedule { expected, found } => write!(
                f,
                "schedule covers {found} unknowns but the system has {expected}"
            ),
            Error::SpinTimeout { unknown } => write!(
                f,
                "busy-wait for unknown {unknown} exceeded its budget; \
                 dependency counters are inconsistent with the schedule"
            ),
            Error::NonpositiveTime => write!(f, "measured time must be positive"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
