use alloc::vec::Vec;

use libm::{erfc, sqrt};

use crate::error::{Error, Result};
use crate::risk::DiscreteLossDistribution;

/// Largest horizon for which the binomial law is built exactly.
pub const MAX_EXACT_HORIZON: u64 = 64;

/// `P(Z > x)` for a standard normal `Z`.
pub fn normal_upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / core::f64::consts::SQRT_2)
}

/// Regret law of the uniform-random policy: `g · Binomial(T, ½)` under
/// either model.
///
/// Binomial coefficients are accumulated in `u128`, so every coefficient is
/// exact before the single division by `2^T`.
pub fn exact_uniform_bandit_law(gap: f64, horizon: u64) -> Result<DiscreteLossDistribution> {
    if !(gap.is_finite() && gap > 0.0) {
        return Err(Error::param("gap", "must be finite and positive"));
    }
    if horizon == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    if horizon > MAX_EXACT_HORIZON {
        return Err(Error::param("horizon", "exact law requires horizon <= 64"));
    }
    let scale = libm::ldexp(1.0, -(horizon as i32));
    let mut coeff: u128 = 1;
    let mut atoms = Vec::with_capacity(horizon as usize + 1);
    for k in 0..=horizon {
        atoms.push((gap * k as f64, coeff as f64 * scale));
        coeff = coeff * (horizon - k) as u128 / (k + 1) as u128;
    }
    DiscreteLossDistribution::new(atoms)
}

/// Loss law of the sign estimator: `2Δ · Bern(p)` with `p = P(Z > √n Δ)`.
pub fn exact_sign_estimator_law(n: u64, delta: f64) -> Result<DiscreteLossDistribution> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::param("delta", "must be finite and positive"));
    }
    let p = normal_upper_tail(sqrt(n as f64) * delta);
    DiscreteLossDistribution::new([(0.0, 1.0 - p), (2.0 * delta, p)])
}
