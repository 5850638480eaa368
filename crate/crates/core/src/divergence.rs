//! Closed-form divergences for unit-variance Gaussians and Bernoulli laws,
//! and the transcript-level budgets of the two Gaussian instantiations.
//!
//! Squared Hellinger uses the unnormalized-by-two convention
//! `D_H²(P‖Q) = 1 - ∫ √(dP dQ)`, so `D_H² ≤ D_KL` and `D_H² ∈ [0, 1]`.

use libm::{log, sqrt};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivergenceKind {
    Kl,
    SquaredHellinger,
}

impl DivergenceKind {
    /// `D(Bern(a) ‖ Bern(b))` for this kind.
    pub fn bernoulli(self, a: f64, b: f64) -> Result<f64> {
        match self {
            DivergenceKind::Kl => kl_bernoulli(a, b),
            DivergenceKind::SquaredHellinger => Ok(hellinger2_bernoulli(a, b)),
        }
    }
}

/// Upper bound `Γ_H ≥ 0` on the squared Hellinger distance between the two
/// transcript laws of a two-point construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HellingerBudget(f64);

impl HellingerBudget {
    pub fn new(gamma_h: f64) -> Result<Self> {
        if gamma_h.is_finite() && gamma_h >= 0.0 {
            Ok(HellingerBudget(gamma_h))
        } else {
            Err(Error::param("gamma_h", "must be finite and nonnegative"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Aggregate separation `ρ = √(2 Γ_H)` entering `Ψ_α`.
    #[inline]
    pub fn rho(self) -> f64 {
        sqrt(2.0 * self.0)
    }
}

/// `D_KL(N(μ₁,1) ‖ N(μ₂,1)) = (μ₁ - μ₂)² / 2`.
pub fn kl_gaussian_unit_var(mu1: f64, mu2: f64) -> f64 {
    let d = mu1 - mu2;
    0.5 * d * d
}

fn xlogy_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * log(x / y)
    }
}

/// Binary KL `a log(a/b) + (1-a) log((1-a)/(1-b))` with `0 log 0 = 0`.
///
/// Infinite divergences (`a > 0, b = 0` or `a < 1, b = 1`) are reported as
/// [`Error::InfiniteDivergence`].
pub fn kl_bernoulli(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::param("bernoulli", "parameters must lie in [0, 1]"));
    }
    if (b == 0.0 && a > 0.0) || (b == 1.0 && a < 1.0) {
        return Err(Error::InfiniteDivergence { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let d = xlogy_ratio(a, b) + xlogy_ratio(1.0 - a, 1.0 - b);
    Ok(d.max(0.0))
}

/// `D_H²(Bern(a) ‖ Bern(b)) = ½[(√a - √b)² + (√(1-a) - √(1-b))²]`.
///
/// Equal to `1 - √(ab) - √((1-a)(1-b))`; the sum-of-squares form is used
/// because it is exactly zero on the diagonal and never negative.
pub fn hellinger2_bernoulli(a: f64, b: f64) -> f64 {
    let d0 = sqrt(a) - sqrt(b);
    let d1 = sqrt(1.0 - a) - sqrt(1.0 - b);
    (0.5 * (d0 * d0 + d1 * d1)).min(1.0)
}

/// `1 - √(ab) - √((1-a)(1-b))`, the affinity form of [`hellinger2_bernoulli`].
pub fn hellinger2_bernoulli_affinity(a: f64, b: f64) -> f64 {
    1.0 - sqrt(a * b) - sqrt((1.0 - a) * (1.0 - b))
}

/// `Γ_H = n · D_KL(N(Δ,1) ‖ N(-Δ,1)) = 2 n Δ²` for mean estimation.
pub fn estimation_budget(n: u64, delta: f64) -> Result<HellingerBudget> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::param("delta", "must be finite and positive"));
    }
    HellingerBudget::new(n as f64 * kl_gaussian_unit_var(delta, -delta))
}

/// `Γ_H = g² T / 2` for the symmetric two-armed bandit pair.
///
/// Every arm's mean moves by `g` between the two environments, so each
/// round contributes `g²/2` whatever the policy pulls.
pub fn bandit_budget(gap: f64, horizon: u64) -> Result<HellingerBudget> {
    if horizon == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    if !(gap.is_finite() && gap > 0.0) {
        return Err(Error::param("gap", "must be finite and positive"));
    }
    HellingerBudget::new(horizon as f64 * kl_gaussian_unit_var(gap / 2.0, -gap / 2.0))
}

/// `D_H² ≤ D_KL` for a Bernoulli pair, up to `1e-12`.
pub fn hellinger_le_kl_check(a: f64, b: f64) -> Result<bool> {
    Ok(hellinger2_bernoulli(a, b) <= kl_bernoulli(a, b)? + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_kl() {
        assert_eq!(kl_gaussian_unit_var(0.5, -0.5), 0.5);
        assert_eq!(kl_gaussian_unit_var(1.3, 1.3), 0.0);
        assert_eq!(kl_gaussian_unit_var(3.0, 1.0), 2.0);
        assert_eq!(kl_gaussian_unit_var(1.0, 3.0), 2.0);
    }

    #[test]
    fn bernoulli_kl() {
        assert_eq!(kl_bernoulli(0.5, 0.5).unwrap(), 0.0);
        assert!((kl_bernoulli(1.0, 0.5).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        let expected = 0.25 * log(1.0 / 3.0) + 0.75 * log(3.0);
        assert!((kl_bernoulli(0.25, 0.75).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.549306).abs() < 1e-6);
        assert!(matches!(
            kl_bernoulli(0.2, 0.0),
            Err(Error::InfiniteDivergence { .. })
        ));
        assert!(matches!(
            kl_bernoulli(0.2, 1.0),
            Err(Error::InfiniteDivergence { .. })
        ));
        assert_eq!(kl_bernoulli(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn bernoulli_hellinger() {
        assert_eq!(hellinger2_bernoulli(0.3, 0.3), 0.0);
        assert!((hellinger2_bernoulli(0.0, 0.75) - 0.5).abs() < 1e-15);
        let expected = 1.0 - sqrt(3.0) / 2.0;
        assert!((hellinger2_bernoulli(0.25, 0.75) - expected).abs() < 1e-15);
        assert!((expected - 0.133975).abs() < 1e-6);
        assert_eq!(hellinger2_bernoulli(0.0, 1.0), 1.0);
    }

    #[test]
    fn budgets() {
        let b = estimation_budget(100, 1.0 / 60.0).unwrap();
        assert!((b.value() - 1.0 / 18.0).abs() < 1e-15);
        assert!((b.rho() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(estimation_budget(4, 0.5).unwrap().value(), 2.0);
        assert!(estimation_budget(1, 0.0).is_err());
        assert!(estimation_budget(0, 1.0).is_err());

        for t in [1u64, 7, 900, 12345] {
            let g = 1.0 / sqrt(2.0 * t as f64);
            assert!((bandit_budget(g, t).unwrap().value() - 0.25).abs() < 1e-14);
        }
        let b = bandit_budget(1.0 / 90.0, 900).unwrap();
        assert!((b.value() - 1.0 / 18.0).abs() < 1e-15);
        assert!(bandit_budget(0.0, 10).is_err());
        assert!(bandit_budget(0.1, 0).is_err());
    }

    #[test]
    fn hellinger_below_kl_examples() {
        assert!(hellinger_le_kl_check(0.3, 0.7).unwrap());
        assert!(hellinger_le_kl_check(0.42, 0.42).unwrap());
        assert!(hellinger_le_kl_check(0.01, 0.99).unwrap());
    }
}
