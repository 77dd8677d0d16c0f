//! Feature schema: ordered feature names and their value vocabularies.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hash::Fnv1a;

/// Reserved value index for categories never seen at training time. It lies
/// outside every vocabulary, so no learned condition can be satisfied by it.
pub const UNSEEN: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    name: String,
    vocabulary: Vec<String>,
}

impl Feature {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vocabulary[v]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    features: Vec<Feature>,
    name_index: HashMap<String, usize>,
}

impl Schema {
    /// Builds a schema from `(feature name, vocabulary)` pairs.
    ///
    /// Every vocabulary must be non-empty and duplicate-free, and feature
    /// names must be unique.
    pub fn new<N, V>(features: Vec<(N, Vec<V>)>) -> Result<Self>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let mut built = Vec::with_capacity(features.len());
        let mut name_index = HashMap::new();
        for (name, vocab) in features {
            let name = name.into();
            let vocabulary: Vec<String> = vocab.into_iter().map(Into::into).collect();
            if vocabulary.is_empty() {
                return Err(Error::Data(format!(
                    "feature '{name}' has an empty vocabulary"
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for label in &vocabulary {
                if !seen.insert(label.as_str()) {
                    return Err(Error::Data(format!(
                        "feature '{name}' lists value '{label}' twice"
                    )));
                }
            }
            if name_index.insert(name.clone(), built.len()).is_some() {
                return Err(Error::Data(format!("duplicate feature name '{name}'")));
            }
            built.push(Feature { name, vocabulary });
        }
        Ok(Schema {
            features: built,
            name_index,
        })
    }

    /// Number of features, `J`.
    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, j: usize) -> &Feature {
        &self.features[j]
    }

    pub fn vocab_size(&self, j: usize) -> usize {
        self.features[j].vocabulary.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn value_index(&self, j: usize, label: &str) -> Option<usize> {
        self.features[j].vocabulary.iter().position(|v| v == label)
    }

    /// Stable fingerprint over feature names and vocabularies, used by model
    /// files to detect schema drift.
    pub fn hash64(&self) -> u64 {
        let mut h = Fnv1a::new();
        for f in &self.features {
            h.update(f.name.as_bytes());
            h.update(&[0xff]);
            for label in &f.vocabulary {
                h.update(label.as_bytes());
                h.update(&[0xfe]);
            }
            h.update(&[0xff]);
        }
        h.finish()
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash64())
    }
}
