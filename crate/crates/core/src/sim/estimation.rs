use alloc::vec::Vec;

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::replicate_rng;
use crate::error::{Error, Result};
use crate::risk::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `θ̂ = Ȳ`.
    SampleMean,
    /// `θ̂ = Δ · sign(Ȳ)`, with `sign(0) = +1`.
    SignCommit,
    /// `θ̂ = 0`.
    AlwaysZero,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [
        Estimator::SampleMean,
        Estimator::SignCommit,
        Estimator::AlwaysZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::SampleMean => "sample_mean",
            Estimator::SignCommit => "sign_commit",
            Estimator::AlwaysZero => "always_zero",
        }
    }

    fn estimate(self, sample_mean: f64, delta: f64) -> f64 {
        match self {
            Estimator::SampleMean => sample_mean,
            Estimator::SignCommit => {
                if sample_mean >= 0.0 {
                    delta
                } else {
                    -delta
                }
            }
            Estimator::AlwaysZero => 0.0,
        }
    }
}

/// Gaussian mean estimation over `θ ∈ {-Δ, +Δ}` with `n` unit-variance
/// observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationConfig {
    pub n: u64,
    pub delta: f64,
    pub estimator: Estimator,
    pub replicates: u64,
    pub seed: u64,
}

impl EstimationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::param("delta", "must be finite and positive"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationOutcome {
    pub theta: f64,
    pub estimate: f64,
    pub loss: f64,
}

/// Clipped absolute error `min{|θ̂ - θ|, 2Δ}`.
#[inline]
pub fn estimation_loss(theta: f64, estimate: f64, delta: f64) -> f64 {
    (estimate - theta).abs().min(2.0 * delta)
}

/// One prior-predictive draw: `θ` from the first stream value, then `n`
/// observations.
pub fn estimation_replicate(config: &EstimationConfig, replicate: u64) -> EstimationOutcome {
    let mut rng = replicate_rng(config.seed, replicate);
    let theta = if rng.next_u64() >> 63 == 0 {
        config.delta
    } else {
        -config.delta
    };
    let mut sum = 0.0;
    for _ in 0..config.n {
        let z: f64 = StandardNormal.sample(&mut rng);
        sum += theta + z;
    }
    let sample_mean = sum / config.n as f64;
    let estimate = config.estimator.estimate(sample_mean, config.delta);
    EstimationOutcome {
        theta,
        estimate,
        loss: estimation_loss(theta, estimate, config.delta),
    }
}

/// Sequential run over all replicates.
pub fn simulate_estimation(config: &EstimationConfig) -> Result<SampleSet> {
    config.validate()?;
    let losses: Vec<f64> = (0..config.replicates)
        .map(|r| estimation_replicate(config, r).loss)
        .collect();
    SampleSet::new(losses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(estimator: Estimator, n: u64, delta: f64) -> EstimationConfig {
        EstimationConfig {
            n,
            delta,
            estimator,
            replicates: 2000,
            seed: 7,
        }
    }

    #[test]
    fn always_zero_loses_delta() {
        let s = simulate_estimation(&config(Estimator::AlwaysZero, 5, 0.3)).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.3));
    }

    #[test]
    fn sign_commit_is_two_valued() {
        let cfg = config(Estimator::SignCommit, 4, 1.0 / 12.0);
        let s = simulate_estimation(&cfg).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0 || v == 2.0 / 12.0));
    }

    #[test]
    fn reproducible() {
        let cfg = config(Estimator::SampleMean, 1, 0.5);
        assert_eq!(simulate_estimation(&cfg), simulate_estimation(&cfg));
        let a = estimation_replicate(&cfg, 17);
        assert_eq!(a, estimation_replicate(&cfg, 17));
    }

    #[test]
    fn prior_is_balanced() {
        let cfg = EstimationConfig {
            replicates: 20_000,
            ..config(Estimator::AlwaysZero, 1, 1.0)
        };
        let positive = (0..cfg.replicates)
            .filter(|&r| estimation_replicate(&cfg, r).theta > 0.0)
            .count() as f64;
        let p = positive / cfg.replicates as f64;
        // 4 standard errors of a fair coin
        assert!((p - 0.5).abs() < 4.0 * libm::sqrt(0.25 / cfg.replicates as f64));
    }

    #[test]
    fn rejects_invalid() {
        assert!(config(Estimator::SampleMean, 0, 1.0).validate().is_err());
        assert!(config(Estimator::SampleMean, 1, 0.0).validate().is_err());
        let mut c = config(Estimator::SampleMean, 1, 1.0);
        c.replicates = 0;
        assert!(simulate_estimation(&c).is_err());
    }
}
