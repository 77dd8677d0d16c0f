//! The unnormalized log-posterior over rule sets: a collapsed structural
//! prior (rule count, rule lengths, feature assignments) plus a conditional
//! likelihood over confusion counts.
//!
//! Both Poisson rates are integrated against their rate-parameterized Gamma
//! priors, giving Negative-Binomial marginals; the shared multinomial weight
//! vector over features is integrated against its Dirichlet prior, giving a
//! single Dirichlet-Multinomial term on the feature counts pooled across
//! rules (this pooling is what rewards feature reuse). Labels inside and
//! outside the covered region are Beta-Bernoulli, so the likelihood reduces
//! to two Beta functions of the confusion counts. Additive constants shared
//! by all rule sets are dropped throughout; the search only ever compares
//! score differences.

use serde::{Deserialize, Serialize};

use crate::bitmap::Bitmap;
use crate::coverage::CoverageIndex;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::rules::RuleSet;
use crate::schema::Schema;
use crate::special::{ln_beta, ln_gamma};

/// Hyperparameters of the structural prior: Gamma(α_M, β_M) over the rule
/// count's Poisson rate, Gamma(α_L, β_L) over the rule lengths' Poisson
/// rate, and a Dirichlet concentration over feature assignment weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorHyperparams<T: Real> {
    pub alpha_m: T,
    pub beta_m: T,
    pub alpha_l: T,
    pub beta_l: T,
    pub theta: Vec<T>,
}

impl<T: Real> PriorHyperparams<T> {
    pub fn new(alpha_m: T, beta_m: T, alpha_l: T, beta_l: T, theta: Vec<T>) -> Self {
        PriorHyperparams {
            alpha_m,
            beta_m,
            alpha_l,
            beta_l,
            theta,
        }
    }

    /// Uniform Dirichlet concentration across `n_features` features.
    pub fn with_uniform_theta(
        alpha_m: T,
        beta_m: T,
        alpha_l: T,
        beta_l: T,
        n_features: usize,
    ) -> Self {
        Self::new(alpha_m, beta_m, alpha_l, beta_l, vec![T::one(); n_features])
    }

    /// α_M = 1, β_M = 10, α_L = 1, β_L = 10, θ_j = 1.
    pub fn defaults(n_features: usize) -> Self {
        Self::with_uniform_theta(T::one(), T::of(10.0), T::one(), T::of(10.0), n_features)
    }

    /// Errors on non-positive entries; returns advisory warnings when the
    /// shape parameters do not encode a preference for small, short rule
    /// sets (α < β keeps the expected Poisson rates below one).
    pub fn validate(&self) -> Result<Vec<String>> {
        let pos = |name: &str, v: T| -> Result<()> {
            if v > T::zero() {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be strictly positive, got {v}"
                )))
            }
        };
        pos("alpha_m", self.alpha_m)?;
        pos("beta_m", self.beta_m)?;
        pos("alpha_l", self.alpha_l)?;
        pos("beta_l", self.beta_l)?;
        if self.theta.is_empty() {
            return Err(Error::Config(
                "theta must have one entry per feature".into(),
            ));
        }
        for (j, &t) in self.theta.iter().enumerate() {
            if t <= T::zero() {
                return Err(Error::Config(format!(
                    "theta[{j}] must be strictly positive, got {t}"
                )));
            }
        }
        let mut warnings = Vec::new();
        if self.alpha_m >= self.beta_m {
            warnings.push(format!(
                "alpha_m = {} >= beta_m = {}: the prior no longer favors few rules",
                self.alpha_m, self.beta_m
            ));
        }
        if self.alpha_l >= self.beta_l {
            warnings.push(format!(
                "alpha_l = {} >= beta_l = {}: the prior no longer favors short rules",
                self.alpha_l, self.beta_l
            ));
        }
        Ok(warnings)
    }
}

/// Beta hyperparameters over the positive rate inside the covered region
/// (`alpha_pos`, `beta_pos`) and the negative rate outside it (`alpha_neg`,
/// `beta_neg`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodHyperparams<T: Real> {
    pub alpha_pos: T,
    pub beta_pos: T,
    pub alpha_neg: T,
    pub beta_neg: T,
}

impl<T: Real> LikelihoodHyperparams<T> {
    pub fn new(alpha_pos: T, beta_pos: T, alpha_neg: T, beta_neg: T) -> Self {
        LikelihoodHyperparams {
            alpha_pos,
            beta_pos,
            alpha_neg,
            beta_neg,
        }
    }

    /// α_+ = α_- = 100, β_+ = β_- = 1.
    pub fn defaults() -> Self {
        Self::new(T::of(100.0), T::one(), T::of(100.0), T::one())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha_pos", self.alpha_pos),
            ("beta_pos", self.beta_pos),
            ("alpha_neg", self.alpha_neg),
            ("beta_neg", self.beta_neg),
        ] {
            if v <= T::zero() {
                return Err(Error::Config(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Prior and likelihood hyperparameters bundled for scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams<T: Real> {
    pub prior: PriorHyperparams<T>,
    pub likelihood: LikelihoodHyperparams<T>,
}

impl<T: Real> Hyperparams<T> {
    pub fn defaults(n_features: usize) -> Self {
        Hyperparams {
            prior: PriorHyperparams::defaults(n_features),
            likelihood: LikelihoodHyperparams::defaults(),
        }
    }

    pub fn validate(&self) -> Result<Vec<String>> {
        self.likelihood.validate()?;
        self.prior.validate()
    }
}

/// tp/fp/tn/fn tallies of a coverage pattern against the labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    pub fn new(true_pos: usize, false_pos: usize, true_neg: usize, false_neg: usize) -> Self {
        ConfusionCounts {
            true_pos,
            false_pos,
            true_neg,
            false_neg,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    /// Tallies covered-vs-label agreement from bitmaps.
    pub fn from_bitmaps(covered: &Bitmap, labels: &Bitmap) -> Self {
        let true_pos = covered.and_count(labels);
        let false_pos = covered.count() - true_pos;
        let positives = labels.count();
        ConfusionCounts {
            true_pos,
            false_pos,
            true_neg: labels.len() - positives - false_pos,
            false_neg: positives - true_pos,
        }
    }
}

/// The decomposed objective for one rule set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorScore<T: Real> {
    pub log_prior: T,
    pub log_likelihood: T,
    pub counts: ConfusionCounts,
}

impl<T: Real> PosteriorScore<T> {
    pub fn total(&self) -> T {
        self.log_prior + self.log_likelihood
    }
}

/// Log of the Negative-Binomial marginal of a Poisson count whose rate is
/// Gamma(α, β)-distributed (rate parameterization).
fn ln_poisson_gamma_marginal<T: Real>(count: usize, alpha: T, beta: T) -> T {
    let k = T::of_usize(count);
    ln_gamma(k + alpha) - ln_gamma(k + T::one()) - ln_gamma(alpha) + alpha * beta.ln()
        - (k + alpha) * (beta + T::one()).ln()
}

/// Collapsed log-prior of a rule set's structure: the rule count, the rule
/// lengths, and the pooled per-feature item counts. Depends on the rules
/// only through those counts, so it is invariant to rule order and to which
/// particular values fill the conditions.
pub fn log_prior<T: Real>(rules: &RuleSet, schema: &Schema, hp: &PriorHyperparams<T>) -> Result<T> {
    let j = schema.feature_count();
    if hp.theta.len() != j {
        return Err(Error::Config(format!(
            "theta has {} entries for {j} features",
            hp.theta.len()
        )));
    }
    rules.validate(schema)?;

    let mut total = ln_poisson_gamma_marginal(rules.len(), hp.alpha_m, hp.beta_m);

    // Per-rule length marginals and within-rule arrangement coefficients.
    let mut pooled = vec![0usize; j];
    for rule in rules.rules() {
        let len = rule.length();
        total += ln_poisson_gamma_marginal(len, hp.alpha_l, hp.beta_l);
        total += ln_gamma(T::of_usize(len) + T::one());
        for c in rule.conditions() {
            total -= ln_gamma(T::of_usize(c.values().len()) + T::one());
            pooled[c.feature()] += c.values().len();
        }
    }

    // Dirichlet-Multinomial on the pooled feature counts.
    let theta_sum: T = hp.theta.iter().copied().sum();
    let pooled_total = T::of_usize(pooled.iter().sum());
    for (g, &t) in pooled.iter().zip(&hp.theta) {
        total += ln_gamma(t + T::of_usize(*g)) - ln_gamma(t);
    }
    total += ln_gamma(theta_sum) - ln_gamma(theta_sum + pooled_total);

    Ok(total)
}

/// Log of the conditional likelihood of the labels given the coverage
/// pattern, up to a constant: `ln B(tp+α_+, fp+β_+) + ln B(tn+α_-, fn+β_-)`.
///
/// Holding the covered size tp+fp fixed, this is strictly increasing in tp
/// whenever `tp + α_+ > fp + β_+ − 1` (always true at the defaults for the
/// data sizes this crate targets); symmetrically for tn.
pub fn log_likelihood<T: Real>(counts: ConfusionCounts, hp: &LikelihoodHyperparams<T>) -> T {
    ln_beta(
        T::of_usize(counts.true_pos) + hp.alpha_pos,
        T::of_usize(counts.false_pos) + hp.beta_pos,
    ) + ln_beta(
        T::of_usize(counts.true_neg) + hp.alpha_neg,
        T::of_usize(counts.false_neg) + hp.beta_neg,
    )
}

/// Scores a rule set whose coverage has already been materialized.
pub fn score<T: Real>(
    rules: &RuleSet,
    dataset: &Dataset,
    coverage: &CoverageIndex,
    hps: &Hyperparams<T>,
) -> Result<PosteriorScore<T>> {
    if coverage.n_rows() != dataset.n_rows() {
        return Err(Error::Internal(format!(
            "coverage tracks {} rows, dataset has {}",
            coverage.n_rows(),
            dataset.n_rows()
        )));
    }
    if coverage.n_rules() != rules.len() {
        return Err(Error::Internal(format!(
            "coverage tracks {} rules, rule set has {}",
            coverage.n_rules(),
            rules.len()
        )));
    }
    let labels = dataset.labels_bitmap();
    score_from_parts(rules, dataset.schema(), coverage.aggregate(), &labels, hps)
}

/// Scoring core shared by [`score`] and the annealing hot path.
pub fn score_from_parts<T: Real>(
    rules: &RuleSet,
    schema: &Schema,
    aggregate: &Bitmap,
    labels: &Bitmap,
    hps: &Hyperparams<T>,
) -> Result<PosteriorScore<T>> {
    let counts = ConfusionCounts::from_bitmaps(aggregate, labels);
    Ok(PosteriorScore {
        log_prior: log_prior(rules, schema, &hps.prior)?,
        log_likelihood: log_likelihood(counts, &hps.likelihood),
        counts,
    })
}
