//! Seeded random generators shared by the integration suites.
#![allow(dead_code)] // each test binary uses a different subset

use mvrs::rules::{Condition, Rule, RuleSet};
use mvrs::{Dataset, Schema};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 1–5 features with vocabularies of 2–6 values.
pub fn random_schema(rng: &mut ChaCha8Rng) -> Schema {
    let n_features = rng.gen_range(1..=5);
    Schema::new(
        (0..n_features)
            .map(|j| {
                let vocab = rng.gen_range(2..=6);
                (
                    format!("f{j}"),
                    (0..vocab).map(|v| format!("v{v}")).collect::<Vec<_>>(),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// Non-tautological condition on `feature`.
pub fn random_condition(schema: &Schema, feature: usize, rng: &mut ChaCha8Rng) -> Condition {
    let vocab = schema.vocab_size(feature);
    let size = rng.gen_range(1..vocab);
    let mut values: Vec<usize> = (0..vocab).collect();
    values.shuffle(rng);
    values.truncate(size);
    Condition::new(feature, values).unwrap()
}

/// Canonical rule with 1..=max_conditions conditions on distinct features.
pub fn random_rule(schema: &Schema, max_conditions: usize, rng: &mut ChaCha8Rng) -> Rule {
    let mut features: Vec<usize> = (0..schema.feature_count()).collect();
    features.shuffle(rng);
    let n = rng.gen_range(1..=max_conditions.min(features.len()));
    Rule::new(
        features[..n]
            .iter()
            .map(|&j| random_condition(schema, j, rng)),
    )
}

/// Canonical rule set of 0..=max_rules rules.
pub fn random_ruleset(schema: &Schema, max_rules: usize, rng: &mut ChaCha8Rng) -> RuleSet {
    let n = rng.gen_range(0..=max_rules);
    RuleSet::new((0..n).map(|_| random_rule(schema, 3, rng)))
}

/// Uniform rows with Bernoulli(0.4) labels.
pub fn random_dataset(schema: &Schema, n_rows: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let rows: Vec<Vec<usize>> = (0..n_rows)
        .map(|_| {
            (0..schema.feature_count())
                .map(|j| rng.gen_range(0..schema.vocab_size(j)))
                .collect()
        })
        .collect();
    let labels: Vec<bool> = (0..n_rows).map(|_| rng.gen::<f64>() < 0.4).collect();
    Dataset::new(schema.clone(), rows, labels).unwrap()
}
