//! Rule-set interchange format.
//!
//! Models are stored as TOML listing, per rule, `(feature name, value
//! labels)` pairs, plus the schema fingerprint for compatibility checking:
//!
//! ```toml
//! format = "mvrs-ruleset"
//! version = 1
//! schema_hash = "819c358d28e4c03e"
//!
//! [[rules]]
//! [[rules.conditions]]
//! feature = "risk"
//! values = ["Extreme"]
//! ```
//!
//! Serialization walks the canonical form, so save → load is the identity
//! on canonical rule sets. Loading resolves labels against the supplied
//! schema and rejects anything it does not recognize.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{Condition, Rule, RuleSet};
use crate::schema::Schema;

const MODEL_FORMAT: &str = "mvrs-ruleset";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    schema_hash: String,
    #[serde(default)]
    rules: Vec<RawRule>,
}

/// Label-based rule representation, shared with the planted-model section of
/// run configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRule {
    pub conditions: Vec<RawCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCondition {
    pub feature: String,
    pub values: Vec<String>,
}

/// Resolves label-based rules against a schema, normalizing the result.
pub fn resolve_rules(raw: &[RawRule], schema: &Schema) -> Result<RuleSet> {
    let mut rules = Vec::with_capacity(raw.len());
    for r in raw {
        if r.conditions.is_empty() {
            return Err(Error::InvalidRule("a rule lists no conditions".into()));
        }
        let mut conditions = Vec::with_capacity(r.conditions.len());
        for c in &r.conditions {
            let feature = schema
                .feature_index(&c.feature)
                .ok_or_else(|| Error::ModelFormat(format!("unknown feature '{}'", c.feature)))?;
            let mut values = Vec::with_capacity(c.values.len());
            for label in &c.values {
                let v = schema.value_index(feature, label).ok_or_else(|| {
                    Error::ModelFormat(format!(
                        "unknown value label '{label}' for feature '{}'",
                        c.feature
                    ))
                })?;
                values.push(v);
            }
            conditions.push(Condition::new(feature, values)?);
        }
        rules.push(Rule::new(conditions));
    }
    RuleSet::new(rules).normalized(schema)
}

fn to_raw(rules: &RuleSet, schema: &Schema) -> Vec<RawRule> {
    rules
        .rules()
        .iter()
        .map(|rule| RawRule {
            conditions: rule
                .conditions()
                .iter()
                .map(|c| RawCondition {
                    feature: schema.feature(c.feature()).name().to_string(),
                    values: c
                        .values()
                        .iter()
                        .map(|&v| schema.feature(c.feature()).label(v).to_string())
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

pub fn model_to_string(rules: &RuleSet, schema: &Schema) -> Result<String> {
    rules.validate(schema)?;
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        version: 1,
        schema_hash: schema.hash_hex(),
        rules: to_raw(rules, schema),
    };
    toml::to_string_pretty(&file).map_err(|e| Error::Internal(format!("model serialization: {e}")))
}

pub fn parse_model(text: &str, schema: &Schema) -> Result<RuleSet> {
    let file: ModelFile = toml::from_str(text)
        .map_err(|e| Error::ModelFormat(format!("malformed model file: {e}")))?;
    if file.format != MODEL_FORMAT {
        return Err(Error::ModelFormat(format!(
            "not a rule-set file (format = '{}')",
            file.format
        )));
    }
    if file.version != 1 {
        return Err(Error::ModelFormat(format!(
            "unsupported model version {}",
            file.version
        )));
    }
    let expected = schema.hash_hex();
    if file.schema_hash != expected {
        return Err(Error::ModelFormat(format!(
            "schema hash mismatch: model has {}, schema is {expected}",
            file.schema_hash
        )));
    }
    resolve_rules(&file.rules, schema)
}

pub fn save_model(rules: &RuleSet, schema: &Schema, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_string(rules, schema)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>, schema: &Schema) -> Result<RuleSet> {
    parse_model(&std::fs::read_to_string(path)?, schema)
}

/// Human-readable if/then listing: one line per rule, conditions joined by
/// `AND`, values joined by `or`. The empty model renders as `if ⟨never⟩`.
pub fn render_if_then(rules: &RuleSet, schema: &Schema) -> Result<String> {
    rules.validate(schema)?;
    let mut out = String::new();
    if rules.is_empty() {
        out.push_str("if ⟨never⟩\n");
    } else {
        for (i, rule) in rules.rules().iter().enumerate() {
            out.push_str(if i == 0 { "if " } else { "or " });
            let line = rule
                .conditions()
                .iter()
                .map(|c| {
                    let feature = schema.feature(c.feature());
                    let values = c
                        .values()
                        .iter()
                        .map(|&v| feature.label(v))
                        .collect::<Vec<_>>()
                        .join(" or ");
                    format!("{} = {values}", feature.name())
                })
                .collect::<Vec<_>>()
                .join(" AND ");
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str("then positive,\nelse negative.\n");
    Ok(out)
}
