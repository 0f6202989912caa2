//! Error type shared by every module in the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// The split mirrors how callers react: `Domain` and `Config` are caller
/// bugs (bad input), `Convergence`/`Accuracy` mean a tolerance was not met
/// (the partial result is carried so diagnostics can report it), `Cfl` and
/// `Diverged` are simulator run-control conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    Domain(String),
    /// An iterative computation stopped before meeting its tolerance.
    Convergence { partial: f64, detail: String },
    /// A quadrature finished but its error estimate exceeds the request.
    Accuracy {
        value: f64,
        err_est: f64,
        requested: f64,
    },
    /// Bad run configuration (unknown key, unparsable value, missing field).
    Config(String),
    /// Proposed time step violates the advective CFL constraint.
    Cfl { suggested_dt: f64 },
    /// Non-finite values appeared in the solution at the given time.
    Diverged { time: f64 },
    /// Filesystem trouble while reading/writing artifacts.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence { partial, detail } => {
                write!(f, "convergence failure ({detail}); partial sum {partial:e}")
            }
            Error::Accuracy {
                value,
                err_est,
                requested,
            } => write!(
                f,
                "accuracy failure: value {value:e} with error estimate {err_est:e} > requested {requested:e}"
            ),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Cfl { suggested_dt } => {
                write!(f, "CFL violation; retry with dt <= {suggested_dt:e}")
            }
            Error::Diverged { time } => {
                write!(f, "solution lost finiteness at t = {time}")
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
