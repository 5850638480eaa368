use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("risk level must lie in [0, 1), got {0}")]
    InvalidRiskLevel(f64),
    #[error("sample set is empty")]
    EmptySamples,
    #[error("non-finite sample at index {index}: {value}")]
    NonFiniteSample { index: usize, value: f64 },
    #[error("invalid atom {index}: value {value}, probability {probability}")]
    InvalidAtom {
        index: usize,
        value: f64,
        probability: f64,
    },
    #[error("atom probabilities sum to {0}, expected 1")]
    UnnormalizedDistribution(f64),
    #[error("divergence is infinite or undefined for Bern({a}) against Bern({b})")]
    InfiniteDivergence { a: f64, b: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
