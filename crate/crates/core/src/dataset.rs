//! The labeled, fully discretized training matrix.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::schema::{Schema, UNSEEN};

/// N rows of value indices plus binary labels, tied to a [`Schema`].
///
/// Cells index into the vocabulary of their feature. Datasets produced by
/// ingestion are strict; datasets re-encoded against a training schema (for
/// prediction or held-out evaluation) may additionally carry the reserved
/// [`UNSEEN`] index.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Schema,
    n_rows: usize,
    cells: Vec<usize>, // row-major, n_rows × feature_count
    labels: Vec<bool>,
}

impl Dataset {
    /// Strict constructor: every cell must index its feature's vocabulary.
    pub fn new(schema: Schema, rows: Vec<Vec<usize>>, labels: Vec<bool>) -> Result<Self> {
        Self::build(schema, rows, labels, false)
    }

    /// Like [`Dataset::new`], but cells may be [`UNSEEN`].
    pub fn with_unseen(schema: Schema, rows: Vec<Vec<usize>>, labels: Vec<bool>) -> Result<Self> {
        Self::build(schema, rows, labels, true)
    }

    fn build(
        schema: Schema,
        rows: Vec<Vec<usize>>,
        labels: Vec<bool>,
        allow_unseen: bool,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("dataset must contain at least one row".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::Data(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let j = schema.feature_count();
        let mut cells = Vec::with_capacity(rows.len() * j);
        for (n, row) in rows.iter().enumerate() {
            if row.len() != j {
                return Err(Error::SchemaMismatch(format!(
                    "row {n} has {} cells, schema has {j} features",
                    row.len()
                )));
            }
            for (f, &v) in row.iter().enumerate() {
                let ok = v < schema.vocab_size(f) || (allow_unseen && v == UNSEEN);
                if !ok {
                    return Err(Error::SchemaMismatch(format!(
                        "row {n}, feature '{}': value index {v} out of vocabulary bounds",
                        schema.feature(f).name()
                    )));
                }
            }
            cells.extend_from_slice(row);
        }
        Ok(Dataset {
            schema,
            n_rows: rows.len(),
            cells,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.schema.feature_count()
    }

    pub fn row(&self, n: usize) -> &[usize] {
        let j = self.schema.feature_count();
        &self.cells[n * j..(n + 1) * j]
    }

    pub fn label(&self, n: usize) -> bool {
        self.labels[n]
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&y| y).count()
    }

    pub fn labels_bitmap(&self) -> Bitmap {
        let mut bm = Bitmap::zeros(self.n_rows);
        for (n, &y) in self.labels.iter().enumerate() {
            if y {
                bm.set(n);
            }
        }
        bm
    }

    /// New dataset holding the given rows (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Data("subset must contain at least one row".into()));
        }
        let j = self.schema.feature_count();
        let mut cells = Vec::with_capacity(indices.len() * j);
        let mut labels = Vec::with_capacity(indices.len());
        for &n in indices {
            cells.extend_from_slice(self.row(n));
            labels.push(self.labels[n]);
        }
        Ok(Dataset {
            schema: self.schema.clone(),
            n_rows: indices.len(),
            cells,
            labels,
        })
    }
}
