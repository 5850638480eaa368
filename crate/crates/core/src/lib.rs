//! Lower bounds on Bayesian conditional value-at-risk from two-point
//! Hellinger arguments, together with the kernels needed to certify them.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; IO, parallel orchestration and the CLI live in the `cvar-lb`
//! crate.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`risk`] | empirical and exact upper-tail CVaR, hinge means |
//! | [`divergence`] | Gaussian/Bernoulli KL and squared Hellinger, transcript budgets |
//! | [`inversion`] | lower inverse of a Bernoulli divergence ball |
//! | [`psi`] | the scalar minimization `Ψ_α(ρ)`, its grid oracle, `c_α`, `ρ*` |
//! | [`bounds`] | two-point template, balanced closed form, estimation and bandit bounds |
//! | [`sim`] | prior-predictive simulators and exact loss laws |
//!
//! All CVaR values are upper-tail: `CVaR_α(L) = min_t { t + E[(L - t)_+] / (1 - α) }`,
//! so `α = 0` is the mean and `α → 1` approaches the essential supremum.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(rustdoc::broken_intra_doc_links)]

extern crate alloc;

pub mod bounds;
pub mod divergence;
mod error;
pub mod inversion;
pub mod psi;
pub mod risk;
pub mod sim;

pub use bounds::{BoundMethod, BoundResult, Branch, TwoPointSpec};
pub use divergence::{DivergenceKind, HellingerBudget};
pub use error::{Error, Result};
pub use inversion::InversionResult;
pub use psi::PsiEvaluation;
pub use risk::{DiscreteLossDistribution, RiskLevel, SampleSet};
