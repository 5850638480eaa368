//! Lower inverse of a Bernoulli divergence ball,
//! `a⁻(B; b) = inf { a ∈ [0, 1] : D(Bern(a) ‖ Bern(b)) ≤ B }`.

use libm::sqrt;

use crate::divergence::DivergenceKind;
use crate::error::{Error, Result};

/// Bracket width in `a` at which bisection stops.
pub const BRACKET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    pub a_minus: f64,
    /// `D(Bern(a_minus) ‖ Bern(b))`.
    pub achieved_divergence: f64,
    pub iterations: u32,
}

/// Smallest `a ∈ [0, b]` whose divergence from `Bern(b)` stays within `budget`.
///
/// `a ↦ D(Bern(a) ‖ Bern(b))` is nonincreasing on `[0, b]`, so the feasible
/// set there is an interval `[a⁻, b]`. The search runs over `s = √a`, where
/// both divergences have bounded slope, and stops once the bracket is below
/// [`BRACKET_TOL`] in `a` and `1e-13` in `s`. The returned point is always
/// feasible.
pub fn bernoulli_inverse(kind: DivergenceKind, budget: f64, b: f64) -> Result<InversionResult> {
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::param("budget", "must be finite and nonnegative"));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::param("b", "must lie in [0, 1]"));
    }
    if budget == 0.0 {
        return Ok(InversionResult {
            a_minus: b,
            achieved_divergence: 0.0,
            iterations: 0,
        });
    }
    if kind == DivergenceKind::Kl && (b == 0.0 || b == 1.0) {
        return Err(Error::InfiniteDivergence { a: 0.0, b });
    }

    // at a = 0 the KL reduces to -log(1 - b)
    let at_zero = kind.bernoulli(0.0, b)?;
    if at_zero <= budget {
        return Ok(InversionResult {
            a_minus: 0.0,
            achieved_divergence: at_zero,
            iterations: 0,
        });
    }

    let mut lo = 0.0_f64; // infeasible
    let mut hi = sqrt(b); // feasible, divergence 0
    let mut hi_div = 0.0;
    let mut iterations = 0;
    while hi * hi - lo * lo > BRACKET_TOL || hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = kind.bernoulli(mid * mid, b)?;
        if d <= budget {
            hi = mid;
            hi_div = d;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(InversionResult {
        a_minus: (hi * hi).min(b),
        achieved_divergence: hi_div,
        iterations,
    })
}

/// `(√b - √(2B))₊²`, a closed-form lower bound on the squared-Hellinger
/// inverse.
pub fn hellinger_inverse_closed(budget: f64, b: f64) -> f64 {
    if budget == 0.0 {
        return b;
    }
    let r = (sqrt(b) - sqrt(2.0 * budget)).max(0.0);
    r * r
}
