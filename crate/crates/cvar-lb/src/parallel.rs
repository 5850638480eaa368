//! Replicate-parallel versions of the core simulators.
//!
//! Losses land in an index-addressed buffer and each replicate owns its own
//! generator stream, so results are identical to the sequential runs in
//! `cvar_lb_core::sim` for any thread count.

use cvar_lb_core::sim::{
    bandit_replicate, estimation_replicate, transcript_log_likelihood_ratio, BanditConfig,
    EstimationConfig,
};
use cvar_lb_core::{Error, Result, SampleSet};
use rayon::prelude::*;

pub fn estimation_losses(config: &EstimationConfig) -> Result<Vec<f64>> {
    config.validate()?;
    Ok((0..config.replicates)
        .into_par_iter()
        .map(|r| estimation_replicate(config, r).loss)
        .collect())
}

pub fn bandit_regrets(config: &BanditConfig) -> Result<Vec<f64>> {
    config.validate()?;
    Ok((0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let transcript = bandit_replicate(config, r);
            debug_assert_eq!(
                transcript.pulls.0 + transcript.pulls.1,
                config.horizon,
                "pull counts must cover the horizon"
            );
            transcript.loss()
        })
        .collect())
}

pub fn simulate_estimation(config: &EstimationConfig) -> Result<SampleSet> {
    SampleSet::new(estimation_losses(config)?)
}

pub fn simulate_bandit(config: &BanditConfig) -> Result<SampleSet> {
    SampleSet::new(bandit_regrets(config)?)
}

/// Parallel `mc_transcript_kl`: mean and standard error of the per-transcript
/// log-likelihood ratio under the first model.
pub fn mc_transcript_kl(config: &BanditConfig) -> Result<(f64, f64)> {
    config.validate()?;
    if config.replicates < 1000 {
        return Err(Error::InvalidParameter {
            name: "replicates",
            reason: "must be at least 1000",
        });
    }
    let llr: Vec<f64> = (0..config.replicates)
        .into_par_iter()
        .map(|r| transcript_log_likelihood_ratio(config, r))
        .collect();
    let n = llr.len() as f64;
    let mean = llr.iter().sum::<f64>() / n;
    let var = llr.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}
