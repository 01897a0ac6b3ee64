use std::fmt;

/// Errors reported by the library.
///
/// Variants are grouped by origin: bad input data, domain violations
/// detected while processing otherwise well-formed input, inconclusive
/// (but never wrong) certification attempts, and internal invariant
/// breaches that indicate a bug rather than a user error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: unparsable rational, bad JSON, inconsistent sizes.
    Input(String),
    /// Division by the zero polynomial.
    DivisionByZero,
    /// A polynomial that must not vanish on `[-1, 1]` does.
    PoleInDomain(String),
    /// The operation requires pure initial conditions at 0.
    UnsupportedCondition(String),
    /// The selection system stayed singular after all retries.
    SingularSystem { tried: Vec<i64> },
    /// Root enclosures could not be refined to the requested radius.
    Refinement(String),
    /// Contraction could not be established; certification is inconclusive.
    Inconclusive(String),
    /// An internal invariant failed; indicates a bug in this crate.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::DivisionByZero => write!(f, "division by zero polynomial"),
            Error::PoleInDomain(what) => {
                write!(f, "{what} vanishes somewhere on [-1, 1]")
            }
            Error::UnsupportedCondition(msg) => {
                write!(f, "unsupported condition: {msg}")
            }
            Error::SingularSystem { tried } => write!(
                f,
                "selection system singular for every tried start index {tried:?}; \
                 the boundary conditions may be linearly dependent on ker L"
            ),
            Error::Refinement(msg) => write!(f, "root refinement failed: {msg}"),
            Error::Inconclusive(msg) => write!(f, "validation inconclusive: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant breach: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
