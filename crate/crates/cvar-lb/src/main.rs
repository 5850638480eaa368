use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvar_lb::config::{load_params, Params};
use cvar_lb::{emit_report, run_experiment, CliError, ExperimentConfig, ExperimentKind};

/// Risk-sensitive (CVaR) minimax lower bounds: closed forms, simulations and
/// dominance checks.
#[derive(Parser)]
#[command(name = "cvar-lb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate ρ·Ψ_α(ρ) over a ρ grid.
    Psi(Flags),
    /// Evaluate the estimation, bandit or two-point template bound.
    Bound(Flags),
    /// Simulate one problem and compare its CVaR with the bound.
    Simulate(Flags),
    /// Simulate and exit nonzero if any bound is violated.
    Verify(Flags),
}

#[derive(Args, Default)]
#[command(allow_negative_numbers = true)]
struct Flags {
    /// JSON object of parameters; command-line flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Risk level in [0, 1); repeatable, comma lists allowed.
    #[arg(long)]
    alpha: Vec<String>,
    /// estimation, bandit, template, or both (verify only).
    #[arg(long)]
    problem: Vec<String>,
    #[arg(long)]
    n: Option<String>,
    /// Separation Δ, a fraction like 1/60, or `optimal`; repeatable.
    #[arg(long)]
    delta: Vec<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// Gap g, a fraction, or `optimal`; repeatable.
    #[arg(long)]
    gap: Vec<String>,
    /// Multiplier on every Δ/g; repeatable.
    #[arg(long)]
    scale: Vec<String>,
    /// uniform, etc, ucb, thompson or all; repeatable.
    #[arg(long)]
    policy: Vec<String>,
    /// sample_mean, sign_commit, always_zero or all; repeatable.
    #[arg(long)]
    estimator: Vec<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    c_explore: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Explicit ρ values; repeatable. Overrides the grid.
    #[arg(long)]
    rho: Vec<String>,
    #[arg(long)]
    rho_max: Option<String>,
    #[arg(long)]
    rho_step: Option<String>,
    #[arg(long)]
    l_max: Option<String>,
    #[arg(long)]
    c_sep: Option<String>,
    #[arg(long)]
    gamma_h: Option<String>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn into_params(self, kind: &str) -> Result<Params, CliError> {
        let mut params = match &self.config {
            Some(path) => load_params(path)?,
            None => Params::new(),
        };
        let lists = [
            ("alpha", self.alpha),
            ("problem", self.problem),
            ("delta", self.delta),
            ("gap", self.gap),
            ("scale", self.scale),
            ("policy", self.policy),
            ("estimator", self.estimator),
            ("rho", self.rho),
        ];
        let singles = [
            ("n", self.n),
            ("horizon", self.horizon),
            ("tau", self.tau),
            ("c_explore", self.c_explore),
            ("replicates", self.replicates),
            ("seed", self.seed),
            ("rho_max", self.rho_max),
            ("rho_step", self.rho_step),
            ("l_max", self.l_max),
            ("c_sep", self.c_sep),
            ("gamma_h", self.gamma_h),
            ("format", self.format),
            ("out", self.out.map(|p| p.to_string_lossy().into_owned())),
        ];
        let overrides = lists
            .into_iter()
            .filter(|(_, v)| !v.is_empty())
            .chain(singles.into_iter().filter_map(|(k, v)| Some((k, vec![v?]))));
        for (key, values) in overrides {
            params.insert(key.to_string(), values);
        }
        params.insert("kind".to_string(), vec![kind.to_string()]);
        Ok(params)
    }
}

fn run(kind: &str, flags: Flags) -> Result<bool, CliError> {
    let params = flags.into_params(kind)?;
    let config = ExperimentConfig::from_params(&params)?;
    let report = run_experiment(&config)?;
    emit_report(&report, config.output_format, config.output_path.as_deref())?;
    if config.kind == ExperimentKind::Verify {
        for row in report.violations() {
            eprintln!(
                "violation: alpha={} {}[{}]={} bound={} empirical={:?} exact={:?} slack={:?}",
                row.alpha,
                row.param_name,
                row.subject.as_deref().unwrap_or("-"),
                row.param_value,
                row.bound,
                row.empirical_cvar,
                row.exact_cvar,
                row.mc_slack,
            );
        }
        return Ok(report.all_dominated());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.command {
        Command::Psi(f) => ("psi", f),
        Command::Bound(f) => ("bound", f),
        Command::Simulate(f) => ("simulate", f),
        Command::Verify(f) => ("verify", f),
    };
    match run(kind, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
