//! Bitmap-backed coverage evaluation.
//!
//! [`ValueIndex`] materializes one bitmap per (feature, value) pair so rule
//! coverage reduces to word-wide ANDs and ORs. [`CoverageIndex`] holds the
//! per-rule bitmaps of the current model plus their union; incremental
//! updates recompute only the touched rule and re-derive the aggregate.

use crate::bitmap::Bitmap;
use crate::dataset::Dataset;
use crate::rules::{Condition, Rule, RuleSet};
use crate::schema::UNSEEN;

/// Per-(feature, value) row bitmaps plus the label bitmap, built once per
/// dataset and shared read-only.
#[derive(Debug, Clone)]
pub struct ValueIndex {
    n_rows: usize,
    value_bitmaps: Vec<Vec<Bitmap>>, // [feature][value]
    labels: Bitmap,
    positives: usize,
}

impl ValueIndex {
    pub fn build(dataset: &Dataset) -> Self {
        let n = dataset.n_rows();
        let schema = dataset.schema();
        let mut value_bitmaps: Vec<Vec<Bitmap>> = (0..schema.feature_count())
            .map(|j| vec![Bitmap::zeros(n); schema.vocab_size(j)])
            .collect();
        for row in 0..n {
            for (j, &v) in dataset.row(row).iter().enumerate() {
                if v != UNSEEN {
                    value_bitmaps[j][v].set(row);
                }
            }
        }
        ValueIndex {
            n_rows: n,
            value_bitmaps,
            labels: dataset.labels_bitmap(),
            positives: dataset.positives(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn labels(&self) -> &Bitmap {
        &self.labels
    }

    pub fn positives(&self) -> usize {
        self.positives
    }

    pub fn negatives(&self) -> usize {
        self.n_rows - self.positives
    }

    pub fn value_bitmap(&self, feature: usize, value: usize) -> &Bitmap {
        &self.value_bitmaps[feature][value]
    }

    /// Rows satisfying the condition: union over its value bitmaps.
    pub fn condition_bitmap(&self, c: &Condition) -> Bitmap {
        let mut bm = Bitmap::zeros(self.n_rows);
        for &v in c.values() {
            bm.union_with(&self.value_bitmaps[c.feature()][v]);
        }
        bm
    }

    /// Rows covered by the rule: intersection over its condition bitmaps.
    /// The empty conjunction covers every row.
    pub fn rule_bitmap(&self, r: &Rule) -> Bitmap {
        let mut it = r.conditions().iter();
        let mut bm = match it.next() {
            Some(c) => self.condition_bitmap(c),
            None => return Bitmap::ones(self.n_rows),
        };
        for c in it {
            bm.intersect_with(&self.condition_bitmap(c));
        }
        bm
    }
}

/// Per-rule coverage bitmaps for a rule set, plus their union. Bitmap `i`
/// corresponds to `rules.rules()[i]` in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageIndex {
    n_rows: usize,
    per_rule: Vec<Bitmap>,
    aggregate: Bitmap,
}

impl CoverageIndex {
    pub fn build(index: &ValueIndex, rules: &RuleSet) -> Self {
        let per_rule: Vec<Bitmap> = rules.rules().iter().map(|r| index.rule_bitmap(r)).collect();
        let mut cov = CoverageIndex {
            n_rows: index.n_rows(),
            per_rule,
            aggregate: Bitmap::zeros(index.n_rows()),
        };
        cov.rebuild_aggregate();
        cov
    }

    /// One-shot construction straight from a dataset.
    pub fn build_from_dataset(dataset: &Dataset, rules: &RuleSet) -> Self {
        Self::build(&ValueIndex::build(dataset), rules)
    }

    pub fn from_parts(n_rows: usize, per_rule: Vec<Bitmap>) -> Self {
        let mut cov = CoverageIndex {
            n_rows,
            per_rule,
            aggregate: Bitmap::zeros(n_rows),
        };
        cov.rebuild_aggregate();
        cov
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_rules(&self) -> usize {
        self.per_rule.len()
    }

    pub fn per_rule(&self) -> &[Bitmap] {
        &self.per_rule
    }

    pub fn rule_bitmap(&self, i: usize) -> &Bitmap {
        &self.per_rule[i]
    }

    pub fn aggregate(&self) -> &Bitmap {
        &self.aggregate
    }

    pub fn covered(&self, row: usize) -> bool {
        self.aggregate.get(row)
    }

    pub fn covered_count(&self) -> usize {
        self.aggregate.count()
    }

    /// Replaces rule `i`'s bitmap and re-derives the aggregate.
    pub fn replace_rule(&mut self, i: usize, bitmap: Bitmap) {
        assert_eq!(bitmap.len(), self.n_rows);
        self.per_rule[i] = bitmap;
        self.rebuild_aggregate();
    }

    pub fn insert_rule(&mut self, i: usize, bitmap: Bitmap) {
        assert_eq!(bitmap.len(), self.n_rows);
        self.per_rule.insert(i, bitmap);
        // insertion only grows coverage, no full rebuild needed
        self.aggregate.union_with(&self.per_rule[i]);
    }

    pub fn remove_rule(&mut self, i: usize) {
        self.per_rule.remove(i);
        self.rebuild_aggregate();
    }

    fn rebuild_aggregate(&mut self) {
        let mut agg = Bitmap::zeros(self.n_rows);
        for bm in &self.per_rule {
            agg.union_with(bm);
        }
        self.aggregate = agg;
    }
}
