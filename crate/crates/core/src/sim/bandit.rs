use alloc::vec::Vec;

use libm::{log, sqrt};
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::replicate_rng;
use crate::error::{Error, Result};
use crate::risk::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    One,
    Two,
}

impl Arm {
    #[inline]
    fn from_index(i: usize) -> Arm {
        if i == 0 {
            Arm::One
        } else {
            Arm::Two
        }
    }
}

/// The symmetric pair `M₁ = (+g/2, -g/2)` and `M₂ = (-g/2, +g/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BanditModel {
    /// Arm 1 optimal.
    First,
    /// Arm 2 optimal.
    Second,
}

impl BanditModel {
    #[inline]
    pub fn mean(self, arm: Arm, gap: f64) -> f64 {
        let half = gap / 2.0;
        match (self, arm) {
            (BanditModel::First, Arm::One) | (BanditModel::Second, Arm::Two) => half,
            _ => -half,
        }
    }

    #[inline]
    pub fn suboptimal_arm(self) -> Arm {
        match self {
            BanditModel::First => Arm::Two,
            BanditModel::Second => Arm::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Fair coin every round.
    UniformRandom,
    /// Alternate arms for `2 τ` rounds, then commit to the higher empirical
    /// mean (ties to arm 1).
    ExploreThenCommit { tau: u64 },
    /// Pull each arm once, then maximize `μ̂_a + c √(2 ln t / N_a)`.
    Ucb { c: f64 },
    /// Independent `N(0, 1)` priors on the arm means, exact conjugate
    /// posteriors under unit-variance rewards.
    ThompsonGaussian,
}

impl Policy {
    /// Explore-then-commit with `τ = ⌈T^{2/3}⌉`, capped at `⌊T/2⌋`.
    pub fn etc_default(horizon: u64) -> Policy {
        let t2 = (horizon as u128) * (horizon as u128);
        let mut tau = libm::cbrt(t2 as f64) as u64;
        while (tau as u128).pow(3) < t2 {
            tau += 1;
        }
        while tau > 0 && ((tau - 1) as u128).pow(3) >= t2 {
            tau -= 1;
        }
        Policy::ExploreThenCommit {
            tau: tau.min(horizon / 2).max(1),
        }
    }

    pub fn ucb_default() -> Policy {
        Policy::Ucb { c: 1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::UniformRandom => "uniform",
            Policy::ExploreThenCommit { .. } => "etc",
            Policy::Ucb { .. } => "ucb",
            Policy::ThompsonGaussian => "thompson",
        }
    }
}

/// Two-armed unit-variance Gaussian bandit over the symmetric pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanditConfig {
    pub horizon: u64,
    pub gap: f64,
    pub policy: Policy,
    pub replicates: u64,
    pub seed: u64,
}

impl BanditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        if !(self.gap.is_finite() && self.gap > 0.0) {
            return Err(Error::param("gap", "must be finite and positive"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates", "must be at least 1"));
        }
        match self.policy {
            Policy::ExploreThenCommit { tau } if tau == 0 || 2 * tau > self.horizon => {
                Err(Error::param("tau", "must satisfy 1 <= tau <= horizon / 2"))
            }
            Policy::Ucb { c } if !(c.is_finite() && c >= 0.0) => {
                Err(Error::param("c_explore", "must be finite and nonnegative"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub actions: Vec<Arm>,
    /// `(N₁, N₂)`.
    pub pulls: (u64, u64),
    pub model: BanditModel,
    pub gap: f64,
}

impl Transcript {
    pub fn horizon(&self) -> u64 {
        self.actions.len() as u64
    }

    /// `g · N_sub` where `N_sub` counts pulls of `model`'s suboptimal arm.
    pub fn regret_under(&self, model: BanditModel) -> f64 {
        let sub = match model.suboptimal_arm() {
            Arm::One => self.pulls.0,
            Arm::Two => self.pulls.1,
        };
        self.gap * sub as f64
    }

    /// Regret under the model that generated the transcript.
    pub fn loss(&self) -> f64 {
        self.regret_under(self.model)
    }
}

struct ArmStats {
    pulls: [u64; 2],
    sums: [f64; 2],
    committed: Option<usize>,
}

impl ArmStats {
    fn new() -> Self {
        ArmStats {
            pulls: [0; 2],
            sums: [0.0; 2],
            committed: None,
        }
    }

    fn mean(&self, a: usize) -> f64 {
        self.sums[a] / self.pulls[a] as f64
    }
}

#[inline]
fn argmax(v: [f64; 2]) -> usize {
    if v[1] > v[0] {
        1
    } else {
        0
    }
}

fn choose(policy: &Policy, round: u64, stats: &mut ArmStats, rng: &mut ChaCha8Rng) -> usize {
    match *policy {
        Policy::UniformRandom => (rng.next_u32() >> 31) as usize,
        Policy::ExploreThenCommit { tau } => {
            if round < 2 * tau {
                (round % 2) as usize
            } else {
                if stats.committed.is_none() {
                    stats.committed = Some(argmax([stats.mean(0), stats.mean(1)]));
                }
                stats.committed.unwrap_or(0)
            }
        }
        Policy::Ucb { c } => {
            if let Some(a) = stats.pulls.iter().position(|&n| n == 0) {
                return a;
            }
            let t = (round + 1) as f64;
            let bonus = |a: usize| c * sqrt(2.0 * log(t) / stats.pulls[a] as f64);
            argmax([stats.mean(0) + bonus(0), stats.mean(1) + bonus(1)])
        }
        Policy::ThompsonGaussian => {
            let mut draw = |a: usize| {
                let precision = stats.pulls[a] as f64 + 1.0;
                let z: f64 = StandardNormal.sample(rng);
                stats.sums[a] / precision + z / sqrt(precision)
            };
            let s0 = draw(0);
            let s1 = draw(1);
            argmax([s0, s1])
        }
    }
}

/// Runs one episode under `model`, calling `observe(arm, reward)` each round.
fn play(
    config: &BanditConfig,
    model: BanditModel,
    rng: &mut ChaCha8Rng,
    mut observe: impl FnMut(Arm, f64),
) -> (u64, u64) {
    let mut stats = ArmStats::new();
    for round in 0..config.horizon {
        let a = choose(&config.policy, round, &mut stats, rng);
        let arm = Arm::from_index(a);
        let noise: f64 = StandardNormal.sample(rng);
        let reward = model.mean(arm, config.gap) + noise;
        stats.pulls[a] += 1;
        stats.sums[a] += reward;
        observe(arm, reward);
    }
    (stats.pulls[0], stats.pulls[1])
}

fn draw_model(rng: &mut ChaCha8Rng) -> BanditModel {
    if rng.next_u64() >> 63 == 0 {
        BanditModel::First
    } else {
        BanditModel::Second
    }
}

/// One prior-predictive episode.
pub fn bandit_replicate(config: &BanditConfig, replicate: u64) -> Transcript {
    let mut rng = replicate_rng(config.seed, replicate);
    let model = draw_model(&mut rng);
    let mut actions = Vec::with_capacity(config.horizon as usize);
    let pulls = play(config, model, &mut rng, |arm, _| actions.push(arm));
    Transcript {
        actions,
        pulls,
        model,
        gap: config.gap,
    }
}

fn replicate_regret(config: &BanditConfig, replicate: u64) -> f64 {
    let mut rng = replicate_rng(config.seed, replicate);
    let model = draw_model(&mut rng);
    let (n1, n2) = play(config, model, &mut rng, |_, _| {});
    let sub = match model {
        BanditModel::First => n2,
        BanditModel::Second => n1,
    };
    config.gap * sub as f64
}

/// Sequential run over all replicates; returns the regrets.
pub fn simulate_bandit(config: &BanditConfig) -> Result<SampleSet> {
    config.validate()?;
    let regrets: Vec<f64> = (0..config.replicates)
        .map(|r| replicate_regret(config, r))
        .collect();
    SampleSet::new(regrets)
}

/// `log dP₁/dP₂` of one transcript drawn under `M₁`.
///
/// Policy terms cancel in the ratio, leaving
/// `Σ_t [(Y_t - μ₂(A_t))² - (Y_t - μ₁(A_t))²] / 2`.
pub fn transcript_log_likelihood_ratio(config: &BanditConfig, replicate: u64) -> f64 {
    let mut rng = replicate_rng(config.seed, replicate);
    // keep the stream layout of a prior-predictive replicate
    let _ = draw_model(&mut rng);
    let mut llr = 0.0;
    play(config, BanditModel::First, &mut rng, |arm, y| {
        let d2 = y - BanditModel::Second.mean(arm, config.gap);
        let d1 = y - BanditModel::First.mean(arm, config.gap);
        llr += 0.5 * (d2 * d2 - d1 * d1);
    });
    llr
}

/// Monte Carlo estimate of `D_KL(P₁ ‖ P₂)` over transcripts, with its
/// standard error. Needs at least `10³` replicates.
pub fn mc_transcript_kl(config: &BanditConfig) -> Result<(f64, f64)> {
    config.validate()?;
    if config.replicates < 1000 {
        return Err(Error::param("replicates", "must be at least 1000"));
    }
    let n = config.replicates as f64;
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, r) in (0..config.replicates).enumerate() {
        let x = transcript_log_likelihood_ratio(config, r);
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    Ok((mean, sqrt(m2 / (n - 1.0) / n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(policy: Policy, horizon: u64) -> BanditConfig {
        BanditConfig {
            horizon,
            gap: 0.3,
            policy,
            replicates: 500,
            seed: 11,
        }
    }

    fn all_policies(horizon: u64) -> [Policy; 4] {
        [
            Policy::UniformRandom,
            Policy::etc_default(horizon),
            Policy::ucb_default(),
            Policy::ThompsonGaussian,
        ]
    }

    #[test]
    fn etc_default_tau() {
        assert_eq!(
            Policy::etc_default(200),
            Policy::ExploreThenCommit { tau: 35 }
        );
        assert_eq!(Policy::etc_default(8), Policy::ExploreThenCommit { tau: 4 });
        assert_eq!(
            Policy::etc_default(27),
            Policy::ExploreThenCommit { tau: 9 }
        );
        assert_eq!(Policy::etc_default(4), Policy::ExploreThenCommit { tau: 2 });
        assert_eq!(
            Policy::etc_default(1000),
            Policy::ExploreThenCommit { tau: 100 }
        );
    }

    #[test]
    fn validation() {
        assert!(config(Policy::ExploreThenCommit { tau: 3 }, 5)
            .validate()
            .is_err());
        assert!(config(Policy::ExploreThenCommit { tau: 0 }, 5)
            .validate()
            .is_err());
        assert!(config(Policy::Ucb { c: -1.0 }, 5).validate().is_err());
        assert!(config(Policy::UniformRandom, 0).validate().is_err());
        let mut c = config(Policy::UniformRandom, 5);
        c.gap = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_round_regret_is_zero_or_gap() {
        for policy in [
            Policy::UniformRandom,
            Policy::ucb_default(),
            Policy::ThompsonGaussian,
        ] {
            let s = simulate_bandit(&config(policy, 1)).unwrap();
            assert!(s.values().iter().all(|&v| v == 0.0 || v == 0.3));
        }
    }

    #[test]
    fn transcripts_are_balanced_and_in_range() {
        let horizon = 37;
        for policy in all_policies(horizon) {
            let cfg = config(policy, horizon);
            for r in 0..200 {
                let tr = bandit_replicate(&cfg, r);
                assert_eq!(tr.pulls.0 + tr.pulls.1, horizon);
                assert_eq!(tr.horizon(), horizon);
                let total =
                    tr.regret_under(BanditModel::First) + tr.regret_under(BanditModel::Second);
                let gt = cfg.gap * horizon as f64;
                assert!((total - gt).abs() <= 4.0 * f64::EPSILON * gt);
                assert!((0.0..=gt).contains(&tr.loss()));
                assert_eq!(tr.loss(), replicate_regret(&cfg, r));
            }
        }
    }

    #[test]
    fn etc_explores_then_commits() {
        let cfg = config(Policy::ExploreThenCommit { tau: 3 }, 20);
        let tr = bandit_replicate(&cfg, 4);
        let head: Vec<Arm> = tr.actions[..6].to_vec();
        assert_eq!(
            head,
            [Arm::One, Arm::Two, Arm::One, Arm::Two, Arm::One, Arm::Two]
        );
        assert!(tr.actions[6..].iter().all(|&a| a == tr.actions[6]));
    }

    #[test]
    fn ucb_pulls_each_arm_first() {
        let tr = bandit_replicate(&config(Policy::ucb_default(), 10), 0);
        assert_eq!(&tr.actions[..2], &[Arm::One, Arm::Two]);
    }

    #[test]
    fn reproducible() {
        let cfg = config(Policy::ThompsonGaussian, 25);
        assert_eq!(simulate_bandit(&cfg), simulate_bandit(&cfg));
        assert_eq!(bandit_replicate(&cfg, 9), bandit_replicate(&cfg, 9));
    }

    #[test]
    fn kl_needs_enough_replicates() {
        assert!(mc_transcript_kl(&config(Policy::UniformRandom, 5)).is_err());
    }
}
