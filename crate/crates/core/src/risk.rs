//! Upper-tail CVaR on empirical and finite atomic laws.
//!
//! Both estimators are the exact Rockafellar–Uryasev minimum
//! `min_t { t + E[(L - t)_+] / (1 - α) }` for their respective measure, so
//! `CVaR_0` is the mean and `mean ≤ CVaR_α ≤ max` always holds.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Tail level `α ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RiskLevel(f64);

impl RiskLevel {
    pub const MEAN: RiskLevel = RiskLevel(0.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..1.0).contains(&alpha) {
            Ok(RiskLevel(alpha))
        } else {
            Err(Error::InvalidRiskLevel(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }

    /// Tail mass `1 - α`.
    #[inline]
    pub fn tail_mass(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for RiskLevel {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        RiskLevel::new(alpha)
    }
}

/// Finite loss realizations, held in nonincreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    /// Validates and sorts. Ties keep their original relative order.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        Ok(SampleSet { values })
    }

    /// Sorted values, largest first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Arithmetic mean, kept inside `[min, max]` against summation rounding.
    pub fn mean(&self) -> f64 {
        let mean = self.values.iter().sum::<f64>() / self.values.len() as f64;
        mean.clamp(self.min(), self.max())
    }

    /// Number of top samples entering the tail average, `⌈(1 - α) N⌉`.
    pub fn tail_count(&self, level: RiskLevel) -> usize {
        let m = level.tail_mass() * self.values.len() as f64;
        (libm::ceil(m) as usize).clamp(1, self.values.len())
    }

    /// Mean and standard error of the top `⌈(1 - α) N⌉` samples.
    ///
    /// The standard error uses the unbiased tail variance and is zero when
    /// the tail holds a single sample.
    pub fn tail_summary(&self, level: RiskLevel) -> TailSummary {
        let k = self.tail_count(level);
        let tail = &self.values[..k];
        let mean = tail.iter().sum::<f64>() / k as f64;
        let std_dev = if k > 1 {
            let ss: f64 = tail.iter().map(|v| (v - mean) * (v - mean)).sum();
            libm::sqrt(ss / (k - 1) as f64)
        } else {
            0.0
        };
        TailSummary {
            count: k,
            mean,
            std_dev,
            std_error: std_dev / libm::sqrt(k as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSummary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
}

/// Finite atomic loss law; atoms are merged by value and kept in descending
/// value order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLossDistribution {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteLossDistribution {
    pub const NORMALIZATION_TOL: f64 = 1e-12;

    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (index, (value, probability)) in atoms.into_iter().enumerate() {
            if !value.is_finite() || !probability.is_finite() || probability < 0.0 {
                return Err(Error::InvalidAtom {
                    index,
                    value,
                    probability,
                });
            }
            merged.push((value, probability));
        }
        if merged.is_empty() {
            return Err(Error::UnnormalizedDistribution(0.0));
        }
        merged.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
        merged.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > Self::NORMALIZATION_TOL {
            return Err(Error::UnnormalizedDistribution(total));
        }
        Ok(DiscreteLossDistribution { atoms: merged })
    }

    /// Uniform law over the given sample values.
    pub fn uniform_over(samples: &SampleSet) -> Self {
        let p = 1.0 / samples.len() as f64;
        let mut atoms: Vec<(f64, f64)> = samples.values().iter().map(|&v| (v, p)).collect();
        atoms.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        DiscreteLossDistribution { atoms }
    }

    /// `(value, probability)` pairs, largest value first.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(v, p)| v * p).sum()
    }

    pub fn max(&self) -> f64 {
        self.atoms[0].0
    }
}

/// Empirical `E[(L - t)_+]`.
pub fn hinge_mean(samples: &SampleSet, t: f64) -> f64 {
    let values = samples.values();
    let total: f64 = values.iter().take_while(|&&v| v > t).map(|&v| v - t).sum();
    total / values.len() as f64
}

/// Rockafellar–Uryasev objective `t + hinge_mean(t) / (1 - α)`.
pub fn ru_objective(samples: &SampleSet, level: RiskLevel, t: f64) -> f64 {
    t + hinge_mean(samples, t) / level.tail_mass()
}

/// Plug-in CVaR: the exact RU minimum on the empirical measure.
///
/// With `m = (1 - α) N` this is the average of the top `m` order statistics,
/// taking a fractional share of the `⌈m⌉`-th; for `m ≤ 1` it is the maximum.
pub fn empirical_cvar(samples: &SampleSet, level: RiskLevel) -> f64 {
    let values = samples.values();
    let n = values.len();
    if level.alpha() == 0.0 {
        return samples.mean();
    }
    let m = level.tail_mass() * n as f64;
    if m <= 1.0 {
        return values[0];
    }
    let k = (libm::ceil(m) as usize).min(n);
    let head: f64 = values[..k - 1].iter().sum();
    let frac = m - (k - 1) as f64;
    let cvar = (head + frac * values[k - 1]) / m;
    // rounding can push the tail average a hair outside [mean, max]
    cvar.clamp(samples.mean(), values[0])
}

/// Exact CVaR of a finite atomic law.
pub fn exact_cvar(dist: &DiscreteLossDistribution, level: RiskLevel) -> f64 {
    if level.alpha() == 0.0 {
        return dist.mean();
    }
    let tail = level.tail_mass();
    let mut remaining = tail;
    let mut acc = 0.0;
    for &(value, probability) in dist.atoms() {
        if remaining <= 0.0 {
            break;
        }
        let take = probability.min(remaining);
        acc += take * value;
        remaining -= take;
    }
    (acc / tail).clamp(dist.mean(), dist.max())
}

/// Executable guard for `CVaR_α ≥ E[L]`.
pub fn check_dominance(samples: &SampleSet, level: RiskLevel) -> bool {
    empirical_cvar(samples, level) >= samples.mean() - 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(v: &[f64]) -> SampleSet {
        SampleSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constant_samples_do_not_round_past_max() {
        let x = 0.020412414523193152;
        let s = set(&vec![x; 50_000]);
        assert_eq!(s.mean(), x);
        for a in [0.0, 0.5, 0.9] {
            assert_eq!(empirical_cvar(&s, RiskLevel::new(a).unwrap()), x);
        }
    }

    fn lvl(a: f64) -> RiskLevel {
        RiskLevel::new(a).unwrap()
    }

    #[test]
    fn risk_level_domain() {
        assert!(RiskLevel::new(0.0).is_ok());
        assert!(RiskLevel::new(0.999).is_ok());
        assert_eq!(RiskLevel::new(1.0), Err(Error::InvalidRiskLevel(1.0)));
        assert!(RiskLevel::new(-0.1).is_err());
        assert!(RiskLevel::new(f64::NAN).is_err());
    }

    #[test]
    fn sample_set_rejects_bad_input() {
        assert_eq!(SampleSet::new(vec![]), Err(Error::EmptySamples));
        assert!(matches!(
            SampleSet::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFiniteSample { index: 1, .. })
        ));
        assert_eq!(set(&[1.0, 3.0, 2.0]).values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn hinge_examples() {
        assert_eq!(hinge_mean(&set(&[1.0, 2.0, 3.0, 4.0]), 2.0), 0.75);
        assert_eq!(hinge_mean(&set(&[5.0]), 5.0), 0.0);
        assert_eq!(hinge_mean(&set(&[0.0, 0.0]), -1.0), 1.0);
    }

    #[test]
    fn empirical_cvar_examples() {
        let s = set(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(empirical_cvar(&s, lvl(0.0)), 2.5);
        assert!((empirical_cvar(&s, lvl(0.5)) - 3.5).abs() < 1e-12);
        assert_eq!(empirical_cvar(&set(&[0.0, 0.0, 0.0, 10.0]), lvl(0.9)), 10.0);
    }

    #[test]
    fn fractional_boundary_sample() {
        // m = 0.75 * 4 = 3: plain top-3 average; m = 0.625 * 4 = 2.5: half of x_(3)
        let s = set(&[1.0, 2.0, 3.0, 4.0]);
        assert!((empirical_cvar(&s, lvl(0.25)) - 3.0).abs() < 1e-12);
        assert!((empirical_cvar(&s, lvl(0.375)) - (4.0 + 3.0 + 0.5 * 2.0) / 2.5).abs() < 1e-12);
    }

    #[test]
    fn exact_cvar_examples() {
        let binom = DiscreteLossDistribution::new([
            (0.0, 1.0 / 16.0),
            (1.0, 4.0 / 16.0),
            (2.0, 6.0 / 16.0),
            (3.0, 4.0 / 16.0),
            (4.0, 1.0 / 16.0),
        ])
        .unwrap();
        assert!((exact_cvar(&binom, lvl(0.5)) - 2.75).abs() < 1e-12);

        let point = DiscreteLossDistribution::new([(3.25, 1.0)]).unwrap();
        for a in [0.0, 0.3, 0.99] {
            assert_eq!(exact_cvar(&point, lvl(a)), 3.25);
        }

        let (delta, p, a) = (0.7, 0.2, 0.6);
        let two = DiscreteLossDistribution::new([(0.0, 1.0 - p), (2.0 * delta, p)]).unwrap();
        assert!((exact_cvar(&two, lvl(a)) - 2.0 * delta * p / (1.0 - a)).abs() < 1e-12);
    }

    #[test]
    fn distribution_merges_and_validates() {
        let d = DiscreteLossDistribution::new([(1.0, 0.25), (2.0, 0.5), (1.0, 0.25)]).unwrap();
        assert_eq!(d.atoms(), &[(2.0, 0.5), (1.0, 0.5)]);
        assert!(matches!(
            DiscreteLossDistribution::new([(1.0, 0.5), (2.0, 0.4)]),
            Err(Error::UnnormalizedDistribution(_))
        ));
        assert!(matches!(
            DiscreteLossDistribution::new([(1.0, -0.5), (2.0, 1.5)]),
            Err(Error::InvalidAtom { index: 0, .. })
        ));
    }

    #[test]
    fn dominance_examples() {
        assert!(check_dominance(&set(&[1.0, 2.0, 3.0, 4.0]), lvl(0.5)));
        assert!(check_dominance(&set(&[7.0]), lvl(0.3)));
        let s = set(&[0.0, 100.0]);
        assert_eq!(empirical_cvar(&s, lvl(0.9)), 100.0);
        assert!(check_dominance(&s, lvl(0.9)));
    }

    #[test]
    fn tail_summary_counts() {
        let s = set(&[1.0, 2.0, 3.0, 4.0]);
        let t = s.tail_summary(lvl(0.5));
        assert_eq!(t.count, 2);
        assert_eq!(t.mean, 3.5);
        assert!((t.std_dev - libm::sqrt(0.5)).abs() < 1e-15);
        assert_eq!(s.tail_summary(lvl(0.99)).count, 1);
        assert_eq!(s.tail_summary(lvl(0.99)).std_error, 0.0);
    }
}
