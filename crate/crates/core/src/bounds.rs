//! Two-point Hellinger lower bounds on Bayesian CVaR.
//!
//! Every bound here minimizes the threshold objective
//!
//! ```text
//! t + L_max / (1 - α) · ( √(((C/2 - t) / L_max)₊) - √Γ_H )₊²
//! ```
//!
//! over `t ∈ [0, L_max]`. On all of ℝ the objective is unbounded below for
//! `α > 0`, and `t ≥ 0` is what keeps the hinge transform inside `[0, 1]`.

use libm::sqrt;

use crate::divergence::{bandit_budget, estimation_budget, DivergenceKind, HellingerBudget};
use crate::error::{Error, Result};
use crate::inversion::bernoulli_inverse;
use crate::psi::{c_alpha, psi, rho_star};
use crate::risk::RiskLevel;

pub use crate::psi::Branch;

/// Grid resolution of the numeric fallback in [`two_point_bound`].
pub const TEMPLATE_GRID_POINTS: usize = 100_000;

/// Hypotheses of the two-point template: losses in `[0, l_max]`, pairwise
/// sums at least `c_sep`, and a Hellinger budget between the two laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointSpec {
    l_max: f64,
    c_sep: f64,
    budget: HellingerBudget,
}

impl TwoPointSpec {
    pub fn new(l_max: f64, c_sep: f64, budget: HellingerBudget) -> Result<Self> {
        if !(l_max.is_finite() && l_max > 0.0) {
            return Err(Error::param("l_max", "must be finite and positive"));
        }
        if !(0.0..=2.0 * l_max).contains(&c_sep) {
            return Err(Error::param("c_sep", "must lie in [0, 2 l_max]"));
        }
        Ok(TwoPointSpec {
            l_max,
            c_sep,
            budget,
        })
    }

    /// Balanced pair: `c_sep = l_max`.
    pub fn balanced(l_max: f64, budget: HellingerBudget) -> Result<Self> {
        TwoPointSpec::new(l_max, l_max, budget)
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    pub fn c_sep(&self) -> f64 {
        self.c_sep
    }

    pub fn budget(&self) -> HellingerBudget {
        self.budget
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    ClosedForm,
    NumericMin,
    GridOracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    /// Minimizing threshold, in loss units.
    pub t_star: f64,
    pub branch: Branch,
    pub method: BoundMethod,
}

/// The template objective at threshold `t`.
pub fn template_objective(spec: &TwoPointSpec, level: RiskLevel, t: f64) -> f64 {
    let l = spec.l_max;
    let inner = sqrt(((spec.c_sep / 2.0 - t) / l).max(0.0));
    let excess = (inner - sqrt(spec.budget.value())).max(0.0);
    t + l / level.tail_mass() * excess * excess
}

/// Minimizes the template objective over `t ∈ [0, l_max]`.
///
/// With `s = √((C/2 - t) / L_max) ∈ [0, S]`, `S = √(C / (2 L_max))`, the
/// objective is decreasing on `s ≤ √Γ_H` and a quadratic with vertex
/// `√Γ_H / α` beyond it, so the minimum sits at `S` or at the clipped vertex.
/// A dense grid in `t` is evaluated alongside; if it ever beats the
/// analytic candidates the grid point is returned with
/// [`BoundMethod::GridOracle`]. Ties go to the smallest `t`.
pub fn two_point_bound(spec: &TwoPointSpec, level: RiskLevel) -> BoundResult {
    let l = spec.l_max;
    let c = spec.c_sep;
    let alpha = level.alpha();
    let gamma = sqrt(spec.budget.value());
    let s_max = sqrt(c / (2.0 * l));

    if c == 0.0 || gamma > s_max {
        return BoundResult {
            value: 0.0,
            t_star: 0.0,
            branch: Branch::Zero,
            method: BoundMethod::ClosedForm,
        };
    }

    let t_of = |s: f64| (c / 2.0 - l * s * s).max(0.0);
    let scale = c / 2.0;
    let tie = 1e-15 * scale.max(1e-300);

    // descending s, i.e. ascending t, so the first near-minimum wins ties
    let mut candidates = [s_max, f64::NAN, gamma.min(s_max)];
    if alpha > 0.0 {
        candidates[1] = (gamma / alpha).clamp(gamma, s_max);
    }
    let mut evaluated = candidates
        .iter()
        .filter(|s| !s.is_nan())
        .map(|&s| (s, template_objective(spec, level, t_of(s))));
    let best = evaluated.clone().fold(f64::INFINITY, |m, (_, v)| m.min(v));
    let (s_best, analytic) = evaluated
        .find(|&(_, v)| v <= best + tie)
        .expect("at least one candidate");

    let branch = if s_best >= s_max {
        Branch::Boundary
    } else {
        Branch::InteriorQuadratic
    };

    let step = (c / 2.0) / (TEMPLATE_GRID_POINTS - 1) as f64;
    let (t_grid, grid) = (0..TEMPLATE_GRID_POINTS)
        .map(|i| {
            let t = i as f64 * step;
            (t, template_objective(spec, level, t))
        })
        .fold(
            (0.0, f64::INFINITY),
            |acc, cur| if cur.1 < acc.1 { cur } else { acc },
        );

    if grid < analytic - tie {
        BoundResult {
            value: grid.max(0.0),
            t_star: t_grid,
            branch,
            method: BoundMethod::GridOracle,
        }
    } else {
        BoundResult {
            value: analytic.max(0.0),
            t_star: t_of(s_best),
            branch,
            method: BoundMethod::ClosedForm,
        }
    }
}

/// Balanced-pair closed form `L_max · Ψ_α(√(2 Γ_H))`.
pub fn balanced_bound(l_max: f64, budget: HellingerBudget, level: RiskLevel) -> BoundResult {
    let p = psi(level, budget.rho());
    BoundResult {
        value: l_max * p.value,
        t_star: l_max * (0.5 - p.x_star),
        branch: p.branch,
        method: BoundMethod::ClosedForm,
    }
}

/// Mean estimation with `n` unit-variance observations and `θ ∈ {-Δ, +Δ}`:
/// `2Δ · Ψ_α(2√n Δ)`.
pub fn estimation_bound(n: u64, delta: f64, level: RiskLevel) -> Result<BoundResult> {
    let budget = estimation_budget(n, delta)?;
    Ok(balanced_bound(2.0 * delta, budget, level))
}

/// Two-armed unit-variance Gaussian bandit with gap `g` over horizon `T`:
/// `g T · Ψ_α(g √T)`.
pub fn bandit_bound(gap: f64, horizon: u64, level: RiskLevel) -> Result<BoundResult> {
    let budget = bandit_budget(gap, horizon)?;
    Ok(balanced_bound(gap * horizon as f64, budget, level))
}

/// Worst-case separation `Δ* = ρ*(α) / (2√n)` and the bound there, which
/// equals `c_α / √n`.
pub fn optimal_separation(n: u64, level: RiskLevel) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let delta = rho_star(level) / (2.0 * sqrt(n as f64));
    Ok((delta, estimation_bound(n, delta, level)?.value))
}

/// Worst-case gap `g* = ρ*(α) / √T` and the bound there, which equals
/// `c_α √T`.
pub fn optimal_gap(horizon: u64, level: RiskLevel) -> Result<(f64, f64)> {
    if horizon == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    let gap = rho_star(level) / sqrt(horizon as f64);
    Ok((gap, bandit_bound(gap, horizon, level)?.value))
}

/// `c_α / √n`.
pub fn estimation_minimax_rate(n: u64, level: RiskLevel) -> f64 {
    c_alpha(level) / sqrt(n as f64)
}

/// `c_α √T`.
pub fn bandit_minimax_rate(horizon: u64, level: RiskLevel) -> f64 {
    c_alpha(level) * sqrt(horizon as f64)
}

/// Hinge lower bound `E[(L - t)₊] ≥ L_max · a⁻(B; b_t)`.
pub fn corollary_hinge_bound(
    l_max: f64,
    budget: f64,
    b_t: f64,
    kind: DivergenceKind,
) -> Result<f64> {
    if !(l_max.is_finite() && l_max > 0.0) {
        return Err(Error::param("l_max", "must be finite and positive"));
    }
    Ok(l_max * bernoulli_inverse(kind, budget, b_t)?.a_minus)
}
