use thiserror::Error;

/// Errors shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method exhausted its budget. `best` is the last estimate
    /// (its modulus for complex-valued integrals).
    #[error("no convergence after {evaluations} evaluations: best estimate {best:e}, estimated error {abs_error:e}")]
    Convergence {
        best: f64,
        abs_error: f64,
        evaluations: usize,
    },
    /// A user-supplied evaluator produced a non-finite value.
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
