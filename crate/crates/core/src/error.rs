//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`].  The variants separate the
//! failure modes callers are expected to branch on: shape mismatches, scalar
//! functions evaluated off their spectral domain, iterative kernels that did
//! not converge, bad configuration values, and violated operation
//! preconditions.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numeric kernels and checkers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension or shape of an argument is unusable (wrong size, ragged
    /// rows, dimension outside the supported range, non-finite entries).
    Shape(String),
    /// An eigenvalue fell outside the open domain of a scalar function.
    Domain {
        /// Name of the scalar function whose domain was violated.
        fn_name: String,
        /// The offending eigenvalue.
        eigenvalue: f64,
        /// Lower endpoint of the open domain interval.
        lo: f64,
        /// Upper endpoint of the open domain interval.
        hi: f64,
    },
    /// An iterative kernel failed to converge; carries a diagnostic residual.
    Numerical(String),
    /// A configuration value (tolerance, order, material parameter) is
    /// outside its admissible range.
    Configuration(String),
    /// A documented operation precondition does not hold for the inputs.
    Precondition(String),
    /// A curve or scan left the domain of the map being probed at
    /// parameter `t`.
    CurveExit {
        /// Curve parameter at which evaluation first failed.
        t: f64,
        /// Human-readable description of the underlying failure.
        reason: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Domain {
                fn_name,
                eigenvalue,
                lo,
                hi,
            } => write!(
                f,
                "domain error: eigenvalue {eigenvalue} of the argument lies outside the open \
                 domain ({lo}, {hi}) of `{fn_name}`"
            ),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
            Error::Configuration(msg) => write!(f, "configuration error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::CurveExit { t, reason } => {
                write!(f, "curve left the map domain at t = {t}: {reason}")
            }
        }
    }
}

impl std::error::Error for Error {}
