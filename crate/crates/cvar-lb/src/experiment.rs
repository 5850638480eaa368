//! Runs a validated configuration and collects one row per
//! (subject, risk level, parameter) combination.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::time::Instant;

use cvar_lb_core::bounds::{
    bandit_bound, estimation_bound, optimal_gap, optimal_separation, two_point_bound,
};
use cvar_lb_core::psi::psi;
use cvar_lb_core::risk::{empirical_cvar, exact_cvar};
use cvar_lb_core::sim::{
    exact_sign_estimator_law, exact_uniform_bandit_law, BanditConfig, EstimationConfig, Estimator,
    Policy, MAX_EXACT_HORIZON,
};
use cvar_lb_core::{DiscreteLossDistribution, RiskLevel, SampleSet};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind, ParamValue, Problem};
use crate::error::CliError;
use crate::parallel;

/// Multiplier on the tail standard error used as Monte Carlo slack.
pub const SLACK_MULTIPLIER: f64 = 5.0;
/// Tolerance for comparisons against exact laws.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub alpha: f64,
    /// Policy or estimator name for simulated rows.
    pub subject: Option<String>,
    pub param_name: String,
    pub param_value: f64,
    pub bound: f64,
    pub t_star: f64,
    pub empirical_cvar: Option<f64>,
    pub exact_cvar: Option<f64>,
    pub stderr: Option<f64>,
    pub mc_slack: Option<f64>,
    /// Absent for rows with nothing to compare against.
    pub dominated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub kind: String,
    pub problems: Vec<String>,
    pub subjects: Vec<String>,
    pub seed: u64,
    pub replicates: u64,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    /// True when no row carries a failed verdict.
    pub fn all_dominated(&self) -> bool {
        self.rows.iter().all(|r| r.dominated != Some(false))
    }

    pub fn violations(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.dominated == Some(false))
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut subjects = Vec::new();
    match config.kind {
        ExperimentKind::Psi => psi_rows(config, &mut rows),
        ExperimentKind::Bound => bound_rows(config, &mut rows)?,
        ExperimentKind::SimulateEstimation
        | ExperimentKind::SimulateBandit
        | ExperimentKind::Verify => {
            if config.problems.contains(&Problem::Estimation) {
                for &e in &config.estimators {
                    subjects.push(e.name().to_string());
                    estimation_rows(config, e, &mut rows)?;
                }
            }
            if config.problems.contains(&Problem::Bandit) {
                for &p in &config.policies {
                    subjects.push(p.name().to_string());
                    bandit_rows(config, p, &mut rows)?;
                }
            }
        }
    }
    Ok(ExperimentReport {
        metadata: ReportMetadata {
            kind: config.kind.name().to_string(),
            problems: config
                .problems
                .iter()
                .map(|p| p.name().to_string())
                .collect(),
            subjects,
            seed: config.seed,
            replicates: if config.kind.is_simulation() {
                config.replicates
            } else {
                0
            },
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
        rows,
    })
}

fn plain_row(alpha: RiskLevel, name: &str, value: f64, bound: f64, t_star: f64) -> ReportRow {
    ReportRow {
        alpha: alpha.alpha(),
        subject: None,
        param_name: name.to_string(),
        param_value: value,
        bound,
        t_star,
        empirical_cvar: None,
        exact_cvar: None,
        stderr: None,
        mc_slack: None,
        dominated: None,
    }
}

/// Bound column is the envelope `ρ Ψ_α(ρ)`; `t_star` is the minimizing
/// threshold per unit loss ceiling, `½ - x*`.
fn psi_rows(config: &ExperimentConfig, rows: &mut Vec<ReportRow>) {
    for &alpha in &config.alphas {
        for &rho in &config.rhos {
            let p = psi(alpha, rho);
            rows.push(plain_row(alpha, "rho", rho, rho * p.value, 0.5 - p.x_star));
        }
    }
}

/// Resolved parameter values for one risk level, scales applied.
fn resolve(
    values: &[ParamValue],
    scales: &[f64],
    optimal: impl Fn() -> cvar_lb_core::Result<(f64, f64)>,
) -> cvar_lb_core::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len() * scales.len());
    for v in values {
        let base = match *v {
            ParamValue::Fixed(x) => x,
            ParamValue::Optimal => optimal()?.0,
        };
        out.extend(scales.iter().map(|s| base * s));
    }
    Ok(out)
}

fn bound_rows(config: &ExperimentConfig, rows: &mut Vec<ReportRow>) -> Result<(), CliError> {
    for &alpha in &config.alphas {
        for &problem in &config.problems {
            match problem {
                Problem::Estimation => {
                    let n = config.n.expect("validated");
                    for delta in resolve(&config.deltas, &config.scales, || {
                        optimal_separation(n, alpha)
                    })? {
                        let b = estimation_bound(n, delta, alpha)?;
                        rows.push(plain_row(alpha, "delta", delta, b.value, b.t_star));
                    }
                }
                Problem::Bandit => {
                    let h = config.horizon.expect("validated");
                    for gap in resolve(&config.gaps, &config.scales, || optimal_gap(h, alpha))? {
                        let b = bandit_bound(gap, h, alpha)?;
                        rows.push(plain_row(alpha, "g", gap, b.value, b.t_star));
                    }
                }
                Problem::Template => {
                    let spec = config.template.expect("validated");
                    let b = two_point_bound(&spec, alpha);
                    rows.push(plain_row(alpha, "c_sep", spec.c_sep(), b.value, b.t_star));
                }
            }
        }
    }
    Ok(())
}

/// Fills in the empirical and exact comparisons for one bound.
fn compared_row(
    alpha: RiskLevel,
    subject: &str,
    name: &str,
    value: f64,
    bound: (f64, f64),
    samples: &SampleSet,
    exact: Option<&DiscreteLossDistribution>,
) -> ReportRow {
    let empirical = empirical_cvar(samples, alpha);
    let stderr = samples.tail_summary(alpha).std_error;
    let slack = SLACK_MULTIPLIER * stderr;
    let exact = exact.map(|d| exact_cvar(d, alpha));
    let dominated = empirical >= bound.0 - slack && exact.is_none_or(|e| e >= bound.0 - EXACT_TOL);
    ReportRow {
        alpha: alpha.alpha(),
        subject: Some(subject.to_string()),
        param_name: name.to_string(),
        param_value: value,
        bound: bound.0,
        t_star: bound.1,
        empirical_cvar: Some(empirical),
        exact_cvar: exact,
        stderr: Some(stderr),
        mc_slack: Some(slack),
        dominated: Some(dominated),
    }
}

fn estimation_rows(
    config: &ExperimentConfig,
    estimator: Estimator,
    rows: &mut Vec<ReportRow>,
) -> Result<(), CliError> {
    let n = config.n.expect("validated");
    let mut cache: HashMap<u64, (SampleSet, Option<DiscreteLossDistribution>)> = HashMap::new();
    for &alpha in &config.alphas {
        for delta in resolve(&config.deltas, &config.scales, || {
            optimal_separation(n, alpha)
        })? {
            let (samples, exact) = match cache.entry(delta.to_bits()) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(slot) => {
                    let sim = EstimationConfig {
                        n,
                        delta,
                        estimator,
                        replicates: config.replicates,
                        seed: config.seed,
                    };
                    let samples = parallel::simulate_estimation(&sim)?;
                    let exact = match estimator {
                        Estimator::SignCommit => Some(exact_sign_estimator_law(n, delta)?),
                        Estimator::AlwaysZero => {
                            Some(DiscreteLossDistribution::new([(delta, 1.0)])?)
                        }
                        Estimator::SampleMean => None,
                    };
                    slot.insert((samples, exact))
                }
            };
            let b = estimation_bound(n, delta, alpha)?;
            rows.push(compared_row(
                alpha,
                estimator.name(),
                "delta",
                delta,
                (b.value, b.t_star),
                samples,
                exact.as_ref(),
            ));
        }
    }
    Ok(())
}

fn bandit_rows(
    config: &ExperimentConfig,
    policy: Policy,
    rows: &mut Vec<ReportRow>,
) -> Result<(), CliError> {
    let h = config.horizon.expect("validated");
    let mut cache: HashMap<u64, (SampleSet, Option<DiscreteLossDistribution>)> = HashMap::new();
    for &alpha in &config.alphas {
        for gap in resolve(&config.gaps, &config.scales, || optimal_gap(h, alpha))? {
            let (samples, exact) = match cache.entry(gap.to_bits()) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(slot) => {
                    let sim = BanditConfig {
                        horizon: h,
                        gap,
                        policy,
                        replicates: config.replicates,
                        seed: config.seed,
                    };
                    let samples = parallel::simulate_bandit(&sim)?;
                    let exact = match policy {
                        Policy::UniformRandom if h <= MAX_EXACT_HORIZON => {
                            Some(exact_uniform_bandit_law(gap, h)?)
                        }
                        _ => None,
                    };
                    slot.insert((samples, exact))
                }
            };
            let b = bandit_bound(gap, h, alpha)?;
            rows.push(compared_row(
                alpha,
                policy.name(),
                "g",
                gap,
                (b.value, b.t_star),
                samples,
                exact.as_ref(),
            ));
        }
    }
    Ok(())
}
