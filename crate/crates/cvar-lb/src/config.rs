//! Experiment configuration: a flat key/value map, validated in one pass.
//!
//! Every key maps to one or more string values, so the same map can come from
//! repeated command-line flags or from a JSON config file. Validation never
//! stops at the first problem; it reports every offending field.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cvar_lb_core::sim::{Estimator, Policy};
use cvar_lb_core::{HellingerBudget, RiskLevel, TwoPointSpec};
use serde_json::Value;

use crate::error::{CliError, ValidationError};

/// Raw parameters: key to list of values, in insertion order per key.
pub type Params = BTreeMap<String, Vec<String>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Psi,
    Bound,
    SimulateEstimation,
    SimulateBandit,
    Verify,
}

impl ExperimentKind {
    pub fn is_simulation(self) -> bool {
        matches!(
            self,
            ExperimentKind::SimulateEstimation
                | ExperimentKind::SimulateBandit
                | ExperimentKind::Verify
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Psi => "psi",
            ExperimentKind::Bound => "bound",
            ExperimentKind::SimulateEstimation => "simulate-estimation",
            ExperimentKind::SimulateBandit => "simulate-bandit",
            ExperimentKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Estimation,
    Bandit,
    Template,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Estimation => "estimation",
            Problem::Bandit => "bandit",
            Problem::Template => "template",
        }
    }
}

/// A separation/gap value, or the keyword resolving to the worst-case choice
/// for each risk level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Fixed(f64),
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub alphas: Vec<RiskLevel>,
    pub problems: Vec<Problem>,
    pub n: Option<u64>,
    pub deltas: Vec<ParamValue>,
    pub horizon: Option<u64>,
    pub gaps: Vec<ParamValue>,
    /// Multipliers applied to every resolved `delta`/`gap`.
    pub scales: Vec<f64>,
    pub estimators: Vec<Estimator>,
    pub policies: Vec<Policy>,
    pub replicates: u64,
    pub seed: u64,
    pub rhos: Vec<f64>,
    pub template: Option<TwoPointSpec>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "alpha",
    "problem",
    "n",
    "delta",
    "horizon",
    "gap",
    "scale",
    "estimator",
    "policy",
    "tau",
    "c_explore",
    "replicates",
    "seed",
    "rho",
    "rho_max",
    "rho_step",
    "l_max",
    "c_sep",
    "gamma_h",
    "format",
    "out",
];

pub const DEFAULT_REPLICATES: u64 = 10_000;

/// Parses a real number, accepting `p/q` fractions.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?,
        None => s.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

struct Reader<'a> {
    params: &'a Params,
    errors: ValidationError,
}

impl<'a> Reader<'a> {
    fn values(&self, key: &str) -> &'a [String] {
        self.params.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    fn single(&mut self, key: &str) -> Option<&'a str> {
        match self.values(key) {
            [] => None,
            [v] => Some(v.as_str()),
            _ => {
                self.errors.push(key, "expects a single value");
                None
            }
        }
    }

    fn integer(&mut self, key: &str, min: u64) -> Option<u64> {
        let raw = self.single(key)?;
        match raw.trim().parse::<u64>() {
            Ok(v) if v >= min => Some(v),
            _ => {
                self.errors
                    .push(key, format!("expected an integer >= {min}, got `{raw}`"));
                None
            }
        }
    }

    fn real(&mut self, key: &str, check: impl Fn(f64) -> bool, what: &str) -> Option<f64> {
        let raw = self.single(key)?;
        match parse_real(raw) {
            Some(v) if check(v) => Some(v),
            _ => {
                self.errors
                    .push(key, format!("expected {what}, got `{raw}`"));
                None
            }
        }
    }

    fn reals(&mut self, key: &str, check: impl Fn(f64) -> bool, what: &str) -> Vec<f64> {
        let mut out = Vec::new();
        for raw in self.values(key) {
            match parse_real(raw) {
                Some(v) if check(v) => out.push(v),
                _ => self
                    .errors
                    .push(key, format!("expected {what}, got `{raw}`")),
            }
        }
        out
    }

    fn param_values(&mut self, key: &str) -> Vec<ParamValue> {
        let mut out = Vec::new();
        for raw in self.values(key) {
            if raw.trim().eq_ignore_ascii_case("optimal") {
                out.push(ParamValue::Optimal);
            } else {
                match parse_real(raw) {
                    Some(v) if v > 0.0 => out.push(ParamValue::Fixed(v)),
                    _ => self.errors.push(
                        key,
                        format!("expected a positive number or `optimal`, got `{raw}`"),
                    ),
                }
            }
        }
        if out.is_empty() && self.values(key).is_empty() {
            out.push(ParamValue::Optimal);
        }
        out
    }
}

fn split_list(values: &[String]) -> impl Iterator<Item = &str> {
    values
        .iter()
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .filter(|v| !v.is_empty())
}

impl ExperimentConfig {
    /// Validates a parameter map. The `kind` key selects the experiment:
    /// `psi`, `bound`, `simulate` or `verify`.
    pub fn from_params(params: &Params) -> Result<Self, ValidationError> {
        let mut r = Reader {
            params,
            errors: ValidationError::default(),
        };
        for key in params.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                r.errors.push(key.clone(), "unknown parameter");
            }
        }

        let kind_raw = r.single("kind");
        let problem_raw: Vec<&str> = split_list(r.values("problem")).collect();
        let parsed_problems: Vec<Problem> = problem_raw
            .iter()
            .filter_map(|p| match p.to_ascii_lowercase().as_str() {
                "estimation" => Some(vec![Problem::Estimation]),
                "bandit" => Some(vec![Problem::Bandit]),
                "template" => Some(vec![Problem::Template]),
                "both" | "all" => Some(vec![Problem::Estimation, Problem::Bandit]),
                other => {
                    r.errors
                        .push("problem", format!("unknown problem `{other}`"));
                    None
                }
            })
            .flatten()
            .collect();

        let kind = match kind_raw {
            Some("psi") => Some(ExperimentKind::Psi),
            Some("bound") => Some(ExperimentKind::Bound),
            Some("verify") => Some(ExperimentKind::Verify),
            Some("simulate") => match parsed_problems.as_slice() {
                [Problem::Estimation] => Some(ExperimentKind::SimulateEstimation),
                [Problem::Bandit] => Some(ExperimentKind::SimulateBandit),
                _ => {
                    r.errors.push(
                        "problem",
                        "simulate needs exactly one of `estimation`, `bandit`",
                    );
                    None
                }
            },
            Some(other) => {
                r.errors
                    .push("kind", format!("unknown experiment kind `{other}`"));
                None
            }
            None => {
                r.errors.push("kind", "missing");
                None
            }
        };

        let mut alphas = Vec::new();
        for raw in split_list(r.values("alpha")) {
            match parse_real(raw).map(RiskLevel::new) {
                Some(Ok(level)) => alphas.push(level),
                _ => r
                    .errors
                    .push("alpha", format!("expected a value in [0, 1), got `{raw}`")),
            }
        }
        if r.values("alpha").is_empty() {
            r.errors
                .push("alpha", "at least one risk level is required");
        }

        let output_format = match r.single("format").map(str::to_ascii_lowercase).as_deref() {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                r.errors
                    .push("format", format!("expected `csv` or `json`, got `{other}`"));
                OutputFormat::Csv
            }
        };
        let output_path = r.single("out").map(PathBuf::from);

        let problems = match kind {
            Some(ExperimentKind::Verify) if parsed_problems.is_empty() => {
                vec![Problem::Estimation, Problem::Bandit]
            }
            Some(ExperimentKind::Bound) if parsed_problems.len() != 1 => {
                r.errors.push(
                    "problem",
                    "bound needs exactly one of `estimation`, `bandit`, `template`",
                );
                Vec::new()
            }
            Some(ExperimentKind::Verify) if parsed_problems.contains(&Problem::Template) => {
                r.errors.push("problem", "`template` has no simulator");
                Vec::new()
            }
            _ => parsed_problems,
        };
        let wants = |p: Problem| problems.contains(&p);

        let n = if wants(Problem::Estimation) {
            let v = r.integer("n", 1);
            if v.is_none() && r.values("n").is_empty() {
                r.errors.push("n", "required for the estimation problem");
            }
            v
        } else {
            None
        };
        let horizon = if wants(Problem::Bandit) {
            let v = r.integer("horizon", 1);
            if v.is_none() && r.values("horizon").is_empty() {
                r.errors.push("horizon", "required for the bandit problem");
            }
            v
        } else {
            None
        };
        let deltas = r.param_values("delta");
        let gaps = r.param_values("gap");
        let mut scales = r.reals("scale", |v| v > 0.0, "a positive multiplier");
        if scales.is_empty() {
            scales.push(1.0);
        }

        let tau = r.integer("tau", 1);
        let c_explore = r.real("c_explore", |v| v >= 0.0, "a nonnegative number");
        let simulating = kind.is_some_and(ExperimentKind::is_simulation);

        let mut estimators = Vec::new();
        for raw in split_list(r.values("estimator")) {
            match raw.to_ascii_lowercase().replace('-', "_").as_str() {
                "sample_mean" | "mean" => estimators.push(Estimator::SampleMean),
                "sign_commit" | "sign" => estimators.push(Estimator::SignCommit),
                "always_zero" | "zero" => estimators.push(Estimator::AlwaysZero),
                "all" => estimators.extend(Estimator::ALL),
                other => r
                    .errors
                    .push("estimator", format!("unknown estimator `{other}`")),
            }
        }
        if estimators.is_empty() && r.values("estimator").is_empty() && wants(Problem::Estimation) {
            match kind {
                Some(ExperimentKind::Verify) => estimators.extend(Estimator::ALL),
                _ => estimators.push(Estimator::SampleMean),
            }
        }

        let mut policies = Vec::new();
        let etc_for = |horizon: Option<u64>| match (tau, horizon) {
            (Some(tau), _) => Policy::ExploreThenCommit { tau },
            (None, Some(h)) => Policy::etc_default(h),
            (None, None) => Policy::ExploreThenCommit { tau: 1 },
        };
        let ucb = Policy::Ucb {
            c: c_explore.unwrap_or(1.0),
        };
        for raw in split_list(r.values("policy")) {
            match raw.to_ascii_lowercase().replace('-', "_").as_str() {
                "uniform" | "uniform_random" => policies.push(Policy::UniformRandom),
                "etc" | "explore_then_commit" => policies.push(etc_for(horizon)),
                "ucb" => policies.push(ucb),
                "thompson" | "thompson_gaussian" => policies.push(Policy::ThompsonGaussian),
                "all" => policies.extend([
                    Policy::UniformRandom,
                    etc_for(horizon),
                    ucb,
                    Policy::ThompsonGaussian,
                ]),
                other => r.errors.push("policy", format!("unknown policy `{other}`")),
            }
        }
        if policies.is_empty() && r.values("policy").is_empty() && wants(Problem::Bandit) {
            match kind {
                Some(ExperimentKind::Verify) => policies.extend([
                    Policy::UniformRandom,
                    etc_for(horizon),
                    ucb,
                    Policy::ThompsonGaussian,
                ]),
                _ => policies.push(Policy::UniformRandom),
            }
        }
        if let (Some(h), Some(t)) = (horizon, tau) {
            let uses_etc = policies
                .iter()
                .any(|p| matches!(p, Policy::ExploreThenCommit { .. }));
            if uses_etc && 2 * t > h {
                r.errors.push(
                    "tau",
                    format!("must satisfy 1 <= tau <= horizon / 2 = {}", h / 2),
                );
            }
        }

        let replicates = if simulating {
            r.integer("replicates", 1).unwrap_or(DEFAULT_REPLICATES)
        } else {
            DEFAULT_REPLICATES
        };
        let seed = match r.single("seed") {
            None => 0,
            Some(raw) => raw.trim().parse::<u64>().unwrap_or_else(|_| {
                r.errors.push(
                    "seed",
                    format!("expected an unsigned 64-bit integer, got `{raw}`"),
                );
                0
            }),
        };

        let mut rhos = r.reals("rho", |v| v >= 0.0, "a nonnegative number");
        if kind == Some(ExperimentKind::Psi) && rhos.is_empty() && r.values("rho").is_empty() {
            let rho_max = r
                .real("rho_max", |v| v >= 0.0, "a nonnegative number")
                .unwrap_or(1.2);
            let step = r
                .real("rho_step", |v| v > 0.0, "a positive step")
                .unwrap_or(0.01);
            let count = (rho_max / step + 1e-9).floor() as usize;
            rhos = (0..=count).map(|i| i as f64 * step).collect();
        }

        let template = if wants(Problem::Template) {
            let l_max = r.real("l_max", |v| v > 0.0, "a positive loss ceiling");
            let c_sep = r.real("c_sep", |v| v >= 0.0, "a nonnegative separation");
            let gamma_h = r.real("gamma_h", |v| v >= 0.0, "a nonnegative budget");
            for (key, v) in [("l_max", l_max), ("c_sep", c_sep), ("gamma_h", gamma_h)] {
                if v.is_none() && r.values(key).is_empty() {
                    r.errors.push(key, "required for the template problem");
                }
            }
            match (l_max, c_sep, gamma_h) {
                (Some(l), Some(c), Some(g)) => {
                    match HellingerBudget::new(g).and_then(|b| TwoPointSpec::new(l, c, b)) {
                        Ok(spec) => Some(spec),
                        Err(_) => {
                            r.errors.push("c_sep", "must lie in [0, 2 l_max]");
                            None
                        }
                    }
                }
                _ => None,
            }
        } else {
            None
        };

        if !r.errors.is_empty() {
            return Err(r.errors);
        }
        Ok(ExperimentConfig {
            kind: kind.expect("kind validated"),
            alphas,
            problems,
            n,
            deltas,
            horizon,
            gaps,
            scales,
            estimators,
            policies,
            replicates,
            seed,
            rhos,
            template,
            output_path,
            output_format,
        })
    }
}

/// Reads a JSON object of parameters. Values may be strings, numbers, or
/// arrays of either.
pub fn load_params(path: &Path) -> Result<Params, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |reason: String| CliError::ConfigFile {
        path: path.to_path_buf(),
        reason,
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let Value::Object(map) = value else {
        return Err(bad("top level must be an object".into()));
    };
    let scalar = |key: &str, v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(bad(format!(
            "`{key}` must be a string, number or list of them"
        ))),
    };
    let mut params = Params::new();
    for (key, v) in &map {
        let values = match v {
            Value::Array(items) => items
                .iter()
                .map(|item| scalar(key, item))
                .collect::<Result<Vec<_>, _>>()?,
            other => vec![scalar(key, other)?],
        };
        params.insert(key.replace('-', "_"), values);
    }
    Ok(params)
}
