use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("value out of floating-point range: {0}")]
    NumericRange(String),
    #[error("non-finite integrand at node {node} ({x}, {y})")]
    NonFiniteIntegrand { node: usize, x: f64, y: f64 },
    #[error("partial sums of |Phi_n|^2 failed the Cauchy test: tail ratio {tail_ratio:e}")]
    Divergence { tail_ratio: f64 },
    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },
    #[error("ill-conditioned request: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
