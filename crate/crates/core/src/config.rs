//! Run configuration file (TOML). Every hyperparameter and search field is
//! settable; anything omitted falls back to the documented default.
//! Command-line flags override file values; environment variables are
//! deliberately not consulted.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::SaConfig;
use crate::ingest::{ColumnSpec, IngestionConfig, MissingPolicy};
use crate::model_io::RawRule;
use crate::posterior::{Hyperparams, LikelihoodHyperparams, PriorHyperparams};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub prior: PriorSection,
    #[serde(default)]
    pub likelihood: LikelihoodSection,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub ingest: IngestSection,
    #[serde(default)]
    pub split: SplitSection,
    pub planted: Option<PlantedSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSection {
    pub alpha_m: Option<f64>,
    pub beta_m: Option<f64>,
    pub alpha_l: Option<f64>,
    pub beta_l: Option<f64>,
    pub theta: Option<ThetaSpec>,
}

/// Dirichlet concentration: a scalar broadcast over all features or one
/// entry per feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Uniform(f64),
    PerFeature(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LikelihoodSection {
    pub alpha_pos: Option<f64>,
    pub beta_pos: Option<f64>,
    pub alpha_neg: Option<f64>,
    pub beta_neg: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub n_iter: Option<usize>,
    pub t0: Option<f64>,
    pub explore_prob: Option<f64>,
    pub max_rule_len: Option<usize>,
    pub max_rules: Option<usize>,
    pub neighbor_cap: Option<usize>,
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestSection {
    pub label_column: Option<String>,
    pub positive_label: Option<String>,
    pub missing_policy: Option<MissingPolicy>,
    pub delimiter: Option<char>,
    #[serde(default)]
    pub columns: BTreeMap<String, ColumnSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub test_fraction: Option<f64>,
}

/// Synthetic-data description for the `gen` command: a schema plus the
/// ground-truth rules used to label uniformly drawn rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedSection {
    pub rows: usize,
    #[serde(default)]
    pub noise: f64,
    pub features: Vec<PlantedFeature>,
    pub rules: Vec<RawRule>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedFeature {
    pub name: String,
    pub values: Vec<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Resolved hyperparameters for a schema with `n_features` features.
    pub fn hyperparams(&self, n_features: usize) -> Result<Hyperparams<f64>> {
        let p = &self.prior;
        let theta = match &p.theta {
            None => vec![1.0; n_features],
            Some(ThetaSpec::Uniform(t)) => vec![*t; n_features],
            Some(ThetaSpec::PerFeature(v)) => {
                if v.len() != n_features {
                    return Err(Error::Config(format!(
                        "theta lists {} entries for {n_features} features",
                        v.len()
                    )));
                }
                v.clone()
            }
        };
        let prior = PriorHyperparams::new(
            p.alpha_m.unwrap_or(1.0),
            p.beta_m.unwrap_or(10.0),
            p.alpha_l.unwrap_or(1.0),
            p.beta_l.unwrap_or(10.0),
            theta,
        );
        let l = &self.likelihood;
        let likelihood = LikelihoodHyperparams::new(
            l.alpha_pos.unwrap_or(100.0),
            l.beta_pos.unwrap_or(1.0),
            l.alpha_neg.unwrap_or(100.0),
            l.beta_neg.unwrap_or(1.0),
        );
        Ok(Hyperparams { prior, likelihood })
    }

    /// Resolved annealing configuration (seed included).
    pub fn sa_config(&self) -> SaConfig<f64> {
        let defaults = SaConfig::<f64>::default();
        let s = &self.search;
        SaConfig {
            n_iter: s.n_iter.unwrap_or(defaults.n_iter),
            t0: s.t0.unwrap_or(defaults.t0),
            explore_prob: s.explore_prob.unwrap_or(defaults.explore_prob),
            max_rule_len: s.max_rule_len.unwrap_or(defaults.max_rule_len),
            max_rules: s.max_rules.unwrap_or(defaults.max_rules),
            neighbor_cap: s.neighbor_cap.unwrap_or(defaults.neighbor_cap),
            seed: self.seed.unwrap_or(defaults.seed),
            restarts: s.restarts.unwrap_or(defaults.restarts),
        }
    }

    /// Resolved ingestion configuration. The label column defaults to
    /// `label` with positive literal `1`, matching what `gen` writes.
    pub fn ingestion(&self) -> IngestionConfig {
        let i = &self.ingest;
        let mut cfg = IngestionConfig::new(
            i.label_column.clone().unwrap_or_else(|| "label".into()),
            i.positive_label.clone().unwrap_or_else(|| "1".into()),
        );
        if let Some(policy) = i.missing_policy {
            cfg.missing_policy = policy;
        }
        if let Some(d) = i.delimiter {
            cfg.delimiter = d;
        }
        cfg.columns = i.columns.clone();
        cfg
    }
}
