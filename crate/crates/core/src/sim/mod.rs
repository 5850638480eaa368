//! Prior-predictive simulation of the two Gaussian instantiations.
//!
//! Each replicate first draws the model from the uniform two-point prior and
//! then the transcript from that model. Replicate `r` reads randomness only
//! from ChaCha8 stream `r` under the master seed, so replicates can run in
//! any order (or concurrently) and still produce the same losses.

mod bandit;
mod estimation;
mod exact;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

pub use bandit::{
    bandit_replicate, mc_transcript_kl, simulate_bandit, transcript_log_likelihood_ratio, Arm,
    BanditConfig, BanditModel, Policy, Transcript,
};
pub use estimation::{
    estimation_loss, estimation_replicate, simulate_estimation, EstimationConfig,
    EstimationOutcome, Estimator,
};
pub use exact::{
    exact_sign_estimator_law, exact_uniform_bandit_law, normal_upper_tail, MAX_EXACT_HORIZON,
};

/// Generator for replicate `replicate` under `seed`.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}
