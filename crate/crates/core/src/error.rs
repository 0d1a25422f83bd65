use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: bad shapes, unparsable config, out-of-range arguments.
    #[error("input error: {0}")]
    Input(String),
    /// The spec parsed but violates one of the torus conditions.
    #[error("validation failed: {0}")]
    Validation(String),
    /// A theta series was requested for a form whose imaginary part is not
    /// positive definite.
    #[error("series does not converge: {0}")]
    Convergence(String),
    /// The requested accuracy cannot be met within the configured limits.
    #[error("precision error: {0}")]
    Precision(String),
    /// An operation was called on objects it does not apply to.
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A formula hits a division by zero for these parameters.
    #[error("singular parameters: {0}")]
    Singular(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by numerics rather than by the caller.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence(_) | Error::Precision(_) | Error::Singular(_))
    }
}
