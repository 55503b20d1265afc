use thiserror::Error;

/// Errors produced by the valuation toolkit.
///
/// The variants mirror the failure classes the command-line front end maps to
/// exit codes: precondition violations, bad input data, singular formulas and
/// numerical breakdown.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation (malformed file, broken invariant, degenerate sample).
    #[error("data error: {0}")]
    Data(String),

    /// A closed form divides by a quantity that is zero.
    #[error("singularity: {0}")]
    Singular(String),

    /// An iterative search did not find a root or fixed point.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// Numerical breakdown: zero pivot, non-finite values, broken matrix structure.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn data(msg: impl Into<String>) -> Error {
    Error::Data(msg.into())
}
