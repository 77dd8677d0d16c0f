//! Multi-value rule set classifiers.
//!
//! A model is a small set of conjunctive rules whose conditions admit
//! multiple values per feature (`procedure = 33 or 34 or 35`), evaluated as
//! a disjunction: a row is positive when at least one rule covers it.
//! Learning is maximum-a-posteriori simulated annealing over a Bayesian
//! objective that trades off accuracy, rule-set complexity, and the number
//! of distinct features used.
//!
//! The crate splits into:
//! - [`schema`] / [`dataset`] / [`rules`] / [`coverage`]: the data model and
//!   bitmap-backed coverage evaluation,
//! - [`posterior`]: the collapsed log-prior and log-likelihood,
//! - [`inference`]: the annealing search,
//! - [`eval`]: metrics, splits, the exhaustive oracle, planted data,
//! - [`ingest`] / [`model_io`] / [`config`]: files in and out.
//!
//! All scoring math is generic over the [`num::Real`] scalar (`f32` or
//! `f64`); the `*64` aliases below cover the common case.

pub mod bitmap;
pub mod config;
pub mod coverage;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod hash;
pub mod inference;
pub mod ingest;
pub mod model_io;
pub mod num;
pub mod posterior;
pub mod rules;
pub mod schema;
pub mod special;

pub use bitmap::Bitmap;
pub use coverage::{CoverageIndex, ValueIndex};
pub use dataset::Dataset;
pub use error::{Error, ErrorClass, Result};
pub use num::Real;
pub use rules::{Condition, Rule, RuleSet};
pub use schema::{Schema, UNSEEN};

/// Double-precision aliases for the generic scoring types.
pub type Hyperparams64 = posterior::Hyperparams<f64>;
pub type PriorHyperparams64 = posterior::PriorHyperparams<f64>;
pub type LikelihoodHyperparams64 = posterior::LikelihoodHyperparams<f64>;
pub type PosteriorScore64 = posterior::PosteriorScore<f64>;
pub type SaConfig64 = inference::SaConfig<f64>;
pub type SaOutcome64 = inference::SaOutcome<f64>;

/// Single-precision aliases.
pub type Hyperparams32 = posterior::Hyperparams<f32>;
pub type PosteriorScore32 = posterior::PosteriorScore<f32>;
pub type SaConfig32 = inference::SaConfig<f32>;
