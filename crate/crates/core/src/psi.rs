//! The scalar minimization shared by both Gaussian instantiations.
//!
//! For `α ∈ [0, 1)` and `ρ ≥ 0`,
//!
//! ```text
//! F_{α,ρ}(x) = ½ - x + (√x - ρ/√2)₊² / (1 - α),   x ∈ [0, ½]
//! Ψ_α(ρ)     = inf_x F_{α,ρ}(x)
//!            = ½ - ρ²/(2α)            0 ≤ ρ ≤ α, α > 0
//!            = (1 - ρ)² / (2(1 - α))  α < ρ ≤ 1
//!            = 0                      ρ ≥ 1
//! c_α        = sup_ρ ρ Ψ_α(ρ)
//!            = 2 / (27 (1 - α))       α ≤ 1/3
//!            = √α / (3√3)             α ≥ 1/3
//! ```
//!
//! With `ρ = √(2 Γ_H)` the balanced two-point bound is `L_max · Ψ_α(ρ)`.

use libm::sqrt;

use crate::risk::RiskLevel;

/// Which piece of a piecewise minimization is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Minimizer strictly inside the domain, at the vertex of the quadratic.
    InteriorQuadratic,
    /// Minimizer at the domain edge `x = ½` (threshold `t = 0`).
    Boundary,
    /// Budget large enough that the bound vanishes.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiEvaluation {
    pub alpha: RiskLevel,
    pub rho: f64,
    pub value: f64,
    pub branch: Branch,
    /// Minimizing `x ∈ [0, ½]` of `F_{α,ρ}`.
    pub x_star: f64,
}

/// `F_{α,ρ}(x)`.
#[inline]
pub fn objective(level: RiskLevel, rho: f64, x: f64) -> f64 {
    let excess = (sqrt(x) - rho / core::f64::consts::SQRT_2).max(0.0);
    0.5 - x + excess * excess / level.tail_mass()
}

/// Closed-form `Ψ_α(ρ)`.
///
/// Breakpoints follow the closed intervals `0 ≤ ρ ≤ α` and `α < ρ ≤ 1`;
/// `ρ = 1` lands on the boundary piece, whose value is already zero there.
pub fn psi(level: RiskLevel, rho: f64) -> PsiEvaluation {
    debug_assert!(rho >= 0.0, "rho must be nonnegative");
    let alpha = level.alpha();
    let (value, branch, x_star) = if alpha > 0.0 && rho <= alpha {
        let s = rho / alpha;
        (
            0.5 - rho * rho / (2.0 * alpha),
            Branch::InteriorQuadratic,
            0.5 * s * s,
        )
    } else if rho <= 1.0 {
        let r = 1.0 - rho;
        (r * r / (2.0 * (1.0 - alpha)), Branch::Boundary, 0.5)
    } else {
        (0.0, Branch::Zero, 0.5)
    };
    PsiEvaluation {
        alpha: level,
        rho,
        value: value.clamp(0.0, 0.5),
        branch,
        x_star,
    }
}

/// Brute-force `min F_{α,ρ}` over `grid_points` evenly spaced `x ∈ [0, ½]`.
///
/// Independent of [`psi`]; used to check it.
pub fn psi_oracle(level: RiskLevel, rho: f64, grid_points: usize) -> f64 {
    let n = grid_points.max(2);
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| objective(level, rho, 0.5 * (i as f64 / last)))
        .fold(f64::INFINITY, f64::min)
}

/// `c_α = sup_{ρ ≥ 0} ρ Ψ_α(ρ)`.
pub fn c_alpha(level: RiskLevel) -> f64 {
    let alpha = level.alpha();
    if alpha <= 1.0 / 3.0 {
        // 27α is exact at α = 1/3, so this gives 1/9 there, unlike 27(1 - α)
        2.0 / (27.0 - 27.0 * alpha)
    } else {
        sqrt(alpha) / (3.0 * sqrt(3.0))
    }
}

/// Maximizer of `ρ Ψ_α(ρ)`: `1/3` for `α ≤ 1/3`, else `√(α/3)`.
pub fn rho_star(level: RiskLevel) -> f64 {
    let alpha = level.alpha();
    if alpha <= 1.0 / 3.0 {
        1.0 / 3.0
    } else {
        sqrt(alpha / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lvl(a: f64) -> RiskLevel {
        RiskLevel::new(a).unwrap()
    }

    #[test]
    fn psi_examples() {
        let p = psi(lvl(0.0), 1.0 / 3.0);
        assert!((p.value - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(p.branch, Branch::Boundary);
        for a in [0.0, 0.2, 0.7] {
            assert_eq!(psi(lvl(a), 0.0).value, 0.5);
        }
        let p = psi(lvl(0.5), 1.1);
        assert_eq!((p.value, p.branch), (0.0, Branch::Zero));
        let p = psi(lvl(0.6), 0.3);
        assert!((p.value - 0.425).abs() < 1e-15);
        assert_eq!(p.branch, Branch::InteriorQuadratic);
    }

    #[test]
    fn breakpoint_assignment() {
        assert_eq!(psi(lvl(0.4), 0.4).branch, Branch::InteriorQuadratic);
        let at_one = psi(lvl(0.4), 1.0);
        assert_eq!(at_one.branch, Branch::Boundary);
        assert_eq!(at_one.value, 0.0);
    }

    #[test]
    fn minimizer_attains_value() {
        for (a, r) in [(0.0, 0.2), (0.6, 0.3), (0.3, 0.5), (0.5, 1.4), (0.9, 0.0)] {
            let p = psi(lvl(a), r);
            assert!(
                (objective(lvl(a), r, p.x_star) - p.value).abs() < 1e-14,
                "{a} {r}"
            );
        }
    }

    #[test]
    fn oracle_examples() {
        assert!((psi_oracle(lvl(0.0), 1.0 / 3.0, 1_000_000) - 2.0 / 9.0).abs() < 1e-5);
        assert!((psi_oracle(lvl(0.0), 0.0, 1000) - 0.5).abs() < 1e-15);
        assert!(psi_oracle(lvl(0.5), 2.0, 100_000).abs() < 1e-5);
    }

    #[test]
    fn constants() {
        assert_eq!(c_alpha(lvl(0.0)), 2.0 / 27.0);
        assert_eq!(c_alpha(lvl(1.0 / 3.0)), 1.0 / 9.0);
        assert!((sqrt(1.0 / 3.0) / (3.0 * sqrt(3.0)) - 1.0 / 9.0).abs() < 1e-15);
        assert!((c_alpha(lvl(0.75)) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(rho_star(lvl(0.0)), 1.0 / 3.0);
        assert!((rho_star(lvl(1.0 / 3.0)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((rho_star(lvl(0.75)) - 0.5).abs() < 1e-15);
        for a in [0.0, 0.1, 1.0 / 3.0, 0.5, 0.75, 0.95] {
            let r = rho_star(lvl(a));
            assert!((r * psi(lvl(a), r).value - c_alpha(lvl(a))).abs() < 1e-12);
        }
    }
}
