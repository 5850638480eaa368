//! Statistical checks of the simulators against closed forms, at four
//! standard errors.

use cvar_lb_core::divergence::{bandit_budget, estimation_budget, kl_gaussian_unit_var};
use cvar_lb_core::sim::{
    bandit_replicate, estimation_loss, estimation_replicate, exact_uniform_bandit_law,
    mc_transcript_kl, replicate_rng, simulate_bandit, simulate_estimation, BanditConfig,
    BanditModel, EstimationConfig, Estimator, Policy,
};
use rand_distr::{Distribution, StandardNormal};

fn policies(horizon: u64) -> [Policy; 4] {
    [
        Policy::UniformRandom,
        Policy::etc_default(horizon),
        Policy::ucb_default(),
        Policy::ThompsonGaussian,
    ]
}

#[test]
fn product_gaussian_kl_by_log_likelihood_ratio() {
    let (n, delta, reps) = (25u64, 0.1, 20_000u64);
    let mut acc = Vec::with_capacity(reps as usize);
    for r in 0..reps {
        let mut rng = replicate_rng(99, r);
        let mut llr = 0.0;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            let y = delta + z;
            llr += 0.5 * ((y + delta).powi(2) - (y - delta).powi(2));
        }
        acc.push(llr);
    }
    let mean = acc.iter().sum::<f64>() / reps as f64;
    let var = acc.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let se = (var / reps as f64).sqrt();
    let target = n as f64 * kl_gaussian_unit_var(delta, -delta);
    assert!(
        (mean - target).abs() <= 4.0 * se,
        "{mean} vs {target} ± {se}"
    );
    assert_eq!(estimation_budget(n, delta).unwrap().value(), target);
}

#[test]
fn transcript_kl_is_policy_independent() {
    let (gap, horizon) = (0.2, 100);
    let target = bandit_budget(gap, horizon).unwrap().value();
    assert!((target - 2.0).abs() < 1e-12);
    for policy in policies(horizon) {
        let cfg = BanditConfig {
            horizon,
            gap,
            policy,
            replicates: 20_000,
            seed: 5,
        };
        let (est, se) = mc_transcript_kl(&cfg).unwrap();
        assert!((est - target).abs() <= 4.0 * se, "{policy:?}: {est} ± {se}");
    }
}

#[test]
fn tiny_gap_kl_scales_with_horizon() {
    let cfg = BanditConfig {
        horizon: 50,
        gap: 1e-3,
        policy: Policy::UniformRandom,
        replicates: 5_000,
        seed: 8,
    };
    let (est, se) = mc_transcript_kl(&cfg).unwrap();
    let target = 5e-7 * 50.0;
    assert!((est - target).abs() <= 4.0 * se);
}

#[test]
fn uniform_policy_matches_binomial_law() {
    let (gap, horizon, reps) = (1.0, 4u64, 40_000u64);
    let cfg = BanditConfig {
        horizon,
        gap,
        policy: Policy::UniformRandom,
        replicates: reps,
        seed: 2024,
    };
    let s = simulate_bandit(&cfg).unwrap();
    let law = exact_uniform_bandit_law(gap, horizon).unwrap();
    for &(value, p) in law.atoms() {
        let freq = s.values().iter().filter(|&&v| v == value).count() as f64 / reps as f64;
        let tol = 4.0 * (p * (1.0 - p) / reps as f64).sqrt();
        assert!((freq - p).abs() <= tol, "atom {value}: {freq} vs {p}");
    }
}

#[test]
fn estimation_pairs_are_balanced() {
    for estimator in Estimator::ALL {
        let cfg = EstimationConfig {
            n: 3,
            delta: 0.4,
            estimator,
            replicates: 5_000,
            seed: 31,
        };
        for r in 0..cfg.replicates {
            let out = estimation_replicate(&cfg, r);
            let sum = estimation_loss(cfg.delta, out.estimate, cfg.delta)
                + estimation_loss(-cfg.delta, out.estimate, cfg.delta);
            assert!(sum >= 2.0 * cfg.delta - 1e-15);
            assert!((0.0..=2.0 * cfg.delta).contains(&out.loss));
        }
    }
}

#[test]
fn bandit_pairs_are_balanced() {
    let horizon = 60;
    for policy in policies(horizon) {
        let cfg = BanditConfig {
            horizon,
            gap: 0.25,
            policy,
            replicates: 1_000,
            seed: 77,
        };
        for r in 0..cfg.replicates {
            let tr = bandit_replicate(&cfg, r);
            assert_eq!(tr.pulls.0 + tr.pulls.1, horizon);
            let gt = cfg.gap * horizon as f64;
            let total = tr.regret_under(BanditModel::First) + tr.regret_under(BanditModel::Second);
            assert!((total - gt).abs() <= 4.0 * f64::EPSILON * gt);
        }
    }
}

#[test]
fn replicate_order_does_not_matter() {
    let cfg = BanditConfig {
        horizon: 30,
        gap: 0.4,
        policy: Policy::ThompsonGaussian,
        replicates: 300,
        seed: 3,
    };
    let forward: Vec<f64> = (0..cfg.replicates)
        .map(|r| bandit_replicate(&cfg, r).loss())
        .collect();
    let mut backward: Vec<f64> = (0..cfg.replicates)
        .rev()
        .map(|r| bandit_replicate(&cfg, r).loss())
        .collect();
    backward.reverse();
    assert_eq!(forward, backward);

    let est = EstimationConfig {
        n: 10,
        delta: 0.2,
        estimator: Estimator::SampleMean,
        replicates: 300,
        seed: 3,
    };
    assert_eq!(simulate_estimation(&est), simulate_estimation(&est));
    let other_seed = EstimationConfig { seed: 4, ..est };
    assert_ne!(simulate_estimation(&est), simulate_estimation(&other_seed));
}

#[test]
fn good_policies_beat_uniform_on_average() {
    let horizon = 200;
    let mean_regret = |policy| {
        let cfg = BanditConfig {
            horizon,
            gap: 0.5,
            policy,
            replicates: 2_000,
            seed: 1,
        };
        simulate_bandit(&cfg).unwrap().mean()
    };
    let uniform = mean_regret(Policy::UniformRandom);
    assert!((uniform - 50.0).abs() < 2.0);
    for policy in [
        Policy::etc_default(horizon),
        Policy::ucb_default(),
        Policy::ThompsonGaussian,
    ] {
        assert!(mean_regret(policy) < 0.6 * uniform, "{policy:?}");
    }
}
