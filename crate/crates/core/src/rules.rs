//! Multi-value rules: conditions over value sets, conjunctive rules, and
//! rule sets evaluated as a disjunction.
//!
//! All three types are canonical by construction — condition values are
//! sorted and deduplicated, rule conditions are sorted by feature with one
//! condition per feature, and rule sets are sorted with duplicate rules
//! merged. Derived `Ord` therefore doubles as the canonical order used for
//! tie-breaking and serialization.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::schema::Schema;

/// A feature paired with a non-empty set of allowed value indices. A row
/// satisfies the condition when its value for the feature is in the set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    feature: usize,
    values: Vec<usize>, // sorted, deduplicated, non-empty
}

impl Condition {
    pub fn new(feature: usize, values: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut values: Vec<usize> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::InvalidRule(format!(
                "condition on feature {feature} has an empty value set"
            )));
        }
        Ok(Condition { feature, values })
    }

    pub fn feature(&self) -> usize {
        self.feature
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn contains(&self, value: usize) -> bool {
        self.values.binary_search(&value).is_ok()
    }

    /// Condition with one extra value.
    pub fn with_value(&self, value: usize) -> Condition {
        let mut values = self.values.clone();
        if let Err(pos) = values.binary_search(&value) {
            values.insert(pos, value);
        }
        Condition {
            feature: self.feature,
            values,
        }
    }

    /// True iff the row's value for this condition's feature is allowed.
    pub fn satisfied_by(&self, row: &[usize]) -> Result<bool> {
        match row.get(self.feature) {
            Some(&v) => Ok(self.contains(v)),
            None => Err(Error::SchemaMismatch(format!(
                "condition references feature {} but the row has {} cells",
                self.feature,
                row.len()
            ))),
        }
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        if self.feature >= schema.feature_count() {
            return Err(Error::SchemaMismatch(format!(
                "condition references feature {}, schema has {}",
                self.feature,
                schema.feature_count()
            )));
        }
        let vocab = schema.vocab_size(self.feature);
        if let Some(&v) = self.values.iter().find(|&&v| v >= vocab) {
            return Err(Error::SchemaMismatch(format!(
                "condition on feature '{}' uses value index {v}, vocabulary has {vocab}",
                schema.feature(self.feature).name()
            )));
        }
        Ok(())
    }

    /// A condition allowing every vocabulary value is satisfied by any row.
    pub fn is_tautology(&self, schema: &Schema) -> bool {
        self.values.len() == schema.vocab_size(self.feature)
    }
}

/// A multi-value rule: a conjunction of conditions, at most one per feature.
///
/// The empty conjunction covers every row; learned models never contain it
/// (see [`RuleSet::normalized`]) but the evaluation semantics are defined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    conditions: Vec<Condition>, // sorted by feature, one per feature
}

impl Rule {
    /// Builds a rule, merging conditions that share a feature by taking the
    /// union of their value sets.
    pub fn new(conditions: impl IntoIterator<Item = Condition>) -> Self {
        let mut by_feature: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in conditions {
            by_feature.entry(c.feature).or_default().extend(c.values);
        }
        let conditions = by_feature
            .into_iter()
            .map(|(feature, values)| {
                Condition::new(feature, values).expect("merged value set is non-empty")
            })
            .collect();
        Rule { conditions }
    }

    pub fn empty() -> Self {
        Rule {
            conditions: Vec::new(),
        }
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn condition_on(&self, feature: usize) -> Option<&Condition> {
        self.conditions
            .binary_search_by_key(&feature, |c| c.feature)
            .ok()
            .map(|i| &self.conditions[i])
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Total item count: the sum of value-set sizes over all conditions.
    pub fn length(&self) -> usize {
        self.conditions.iter().map(|c| c.values.len()).sum()
    }

    /// True iff every condition is satisfied; the empty conjunction is true.
    pub fn covers(&self, row: &[usize]) -> Result<bool> {
        for c in &self.conditions {
            if !c.satisfied_by(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        self.conditions.iter().try_for_each(|c| c.validate(schema))
    }

    /// Copy of this rule without the condition on `feature`.
    pub fn without_condition(&self, feature: usize) -> Rule {
        Rule {
            conditions: self
                .conditions
                .iter()
                .filter(|c| c.feature != feature)
                .cloned()
                .collect(),
        }
    }

    /// Copy with one condition replaced (or inserted; same-feature merge).
    pub fn with_condition(&self, condition: Condition) -> Rule {
        let mut conditions: Vec<Condition> = self
            .conditions
            .iter()
            .filter(|c| c.feature != condition.feature)
            .cloned()
            .collect();
        conditions.push(condition);
        Rule::new(conditions)
    }

    /// Drops tautological (full-vocabulary) conditions. May leave the rule
    /// empty; callers decide whether that is acceptable.
    pub fn without_tautologies(&self, schema: &Schema) -> Result<Rule> {
        self.validate(schema)?;
        Ok(Rule {
            conditions: self
                .conditions
                .iter()
                .filter(|c| !c.is_tautology(schema))
                .cloned()
                .collect(),
        })
    }
}

/// A set of multi-value rules; a row is classified positive iff at least one
/// rule covers it. The empty set predicts all-negative.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleSet {
    rules: Vec<Rule>, // sorted, deduplicated
}

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet::default()
    }

    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut rules: Vec<Rule> = rules.into_iter().collect();
        rules.sort_unstable();
        rules.dedup();
        RuleSet { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Disjunction over the rules: 1 iff some rule covers the row.
    pub fn classify(&self, row: &[usize]) -> Result<bool> {
        for r in &self.rules {
            if r.covers(row)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Index of the first rule (in canonical order) covering the row.
    pub fn first_covering(&self, row: &[usize]) -> Result<Option<usize>> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.covers(row)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        self.rules.iter().try_for_each(|r| r.validate(schema))
    }

    /// Canonical learned-model form: tautological conditions dropped and
    /// duplicates merged. A rule left with no conditions is rejected —
    /// learned models require at least one condition per rule.
    pub fn normalized(&self, schema: &Schema) -> Result<RuleSet> {
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let r = r.without_tautologies(schema)?;
            if r.is_empty() {
                return Err(Error::InvalidRule(
                    "rule reduces to an empty conjunction (all conditions tautological)".into(),
                ));
            }
            rules.push(r);
        }
        Ok(RuleSet::new(rules))
    }

    /// Conditions across all rules.
    pub fn n_conditions(&self) -> usize {
        self.rules.iter().map(|r| r.conditions.len()).sum()
    }

    /// Items across all rules (sum of rule lengths).
    pub fn n_items(&self) -> usize {
        self.rules.iter().map(|r| r.length()).sum()
    }

    /// Distinct feature indices used by any condition.
    pub fn feature_set(&self) -> Vec<usize> {
        let mut feats: Vec<usize> = self
            .rules
            .iter()
            .flat_map(|r| r.conditions.iter().map(|c| c.feature))
            .collect();
        feats.sort_unstable();
        feats.dedup();
        feats
    }

    /// Expands every rule into the equivalent set of single-value rules (the
    /// cartesian product of its value sets). Coverage is preserved; the
    /// result is typically much larger, which is the point of measuring it.
    pub fn expand_single_valued(&self) -> RuleSet {
        let mut out = Vec::new();
        for rule in &self.rules {
            let mut partial: Vec<Vec<Condition>> = vec![Vec::new()];
            for c in &rule.conditions {
                let mut next = Vec::with_capacity(partial.len() * c.values.len());
                for prefix in &partial {
                    for &v in &c.values {
                        let mut conds = prefix.clone();
                        conds.push(Condition::new(c.feature, [v]).expect("single value"));
                        next.push(conds);
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(Rule::new));
        }
        RuleSet::new(out)
    }
}
