//! Tabular ingestion: delimited text in, discretized [`Dataset`] plus a
//! [`Codebook`] out.
//!
//! The codebook remembers everything needed to encode new rows against the
//! training schema: per-feature encoders (vocabulary lookup or quantile bin
//! edges), the missing-value policy, and the label column. Unseen categories
//! at prediction time map to the reserved index that satisfies no condition.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::schema::{Schema, UNSEEN};

/// Vocabulary entry representing a missing cell under
/// [`MissingPolicy::AsCategory`].
pub const MISSING_LABEL: &str = "⟨missing⟩";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSpec {
    /// Vocabulary built from observed values in first-appearance order.
    Categorical,
    /// Quantile-binned; the vocabulary is the ordered bin labels.
    Continuous { bins: usize },
    /// Excluded from the schema entirely.
    Ignore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Missing cells become their own category (missingness is often
    /// informative in clinical data).
    AsCategory,
    /// Rows with any missing feature cell are dropped.
    DropRow,
}

/// How a delimited file becomes a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestionConfig {
    pub label_column: String,
    /// Label cells equal to this literal are positive; all others negative.
    pub positive_label: String,
    /// Per-column overrides; unlisted columns default to categorical.
    pub columns: BTreeMap<String, ColumnSpec>,
    pub missing_policy: MissingPolicy,
    pub delimiter: char,
}

impl IngestionConfig {
    pub fn new(label_column: impl Into<String>, positive_label: impl Into<String>) -> Self {
        IngestionConfig {
            label_column: label_column.into(),
            positive_label: positive_label.into(),
            columns: BTreeMap::new(),
            missing_policy: MissingPolicy::AsCategory,
            delimiter: ',',
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, spec) in &self.columns {
            if let ColumnSpec::Continuous { bins } = spec {
                if *bins < 2 {
                    return Err(Error::Config(format!(
                        "column '{name}': continuous binning needs at least 2 bins, got {bins}"
                    )));
                }
            }
            if name == &self.label_column && *spec != ColumnSpec::Ignore {
                return Err(Error::Config(format!(
                    "label column '{name}' cannot also be a feature"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Delimited text
// ---------------------------------------------------------------------------

/// Minimal RFC-4180-style reader: fields may be quoted with `"`, quotes
/// escape as `""`, and quoted fields may contain delimiters and newlines.
pub fn parse_delimited(text: &str, delimiter: char) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    let mut row: Vec<String> = Vec::new();
    let mut field = String::new();
    let mut chars = text.chars().peekable();
    let mut in_quotes = false;
    let mut any = false;
    while let Some(c) = chars.next() {
        any = true;
        if in_quotes {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push(c);
            }
        } else if c == '"' && field.is_empty() {
            in_quotes = true;
        } else if c == delimiter {
            row.push(std::mem::take(&mut field));
        } else if c == '\n' || c == '\r' {
            if c == '\r' && chars.peek() == Some(&'\n') {
                chars.next();
            }
            row.push(std::mem::take(&mut field));
            rows.push(std::mem::take(&mut row));
        } else {
            field.push(c);
        }
    }
    if in_quotes {
        return Err(Error::Data("unterminated quoted field".into()));
    }
    if !field.is_empty() || !row.is_empty() {
        row.push(field);
        rows.push(row);
    }
    if !any {
        return Err(Error::Data("empty file".into()));
    }
    Ok(rows)
}

/// Writes rows with quoting only where needed.
pub fn format_delimited(rows: &[Vec<String>], delimiter: char) -> String {
    let mut out = String::new();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(delimiter);
            }
            let needs_quotes = cell.contains(delimiter)
                || cell.contains('"')
                || cell.contains('\n')
                || cell.contains('\r');
            if needs_quotes {
                let _ = write!(out, "\"{}\"", cell.replace('"', "\"\""));
            } else {
                out.push_str(cell);
            }
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Quantile discretization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    /// Strictly increasing interior bin edges; empty means a single bin.
    pub edges: Vec<f64>,
    /// Bin index per input value.
    pub bins: Vec<usize>,
    /// All inputs were identical.
    pub degenerate: bool,
}

/// Equal-frequency binning: interior edges at the k/n_bins quantiles
/// (linear interpolation), duplicate edges merged, so fewer than `n_bins`
/// bins can come back on skewed data. Bin `i` is the half-open interval
/// `(edge[i-1], edge[i]]`.
pub fn discretize(values: &[f64], n_bins: usize) -> Result<Discretization> {
    if n_bins < 2 {
        return Err(Error::Config(format!("need at least 2 bins, got {n_bins}")));
    }
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data(
            "discretization needs at least one value and all values finite".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let max = *sorted.last().expect("non-empty");
    let degenerate = sorted[0] == max;

    let mut edges = Vec::new();
    let n = sorted.len();
    for k in 1..n_bins {
        let h = (n - 1) as f64 * k as f64 / n_bins as f64;
        let lo = h.floor() as usize;
        let frac = h - lo as f64;
        let q = if lo + 1 < n {
            sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
        } else {
            sorted[lo]
        };
        // keep edges strictly increasing and below the maximum so every bin
        // that survives is populated
        if q < max && edges.last().map_or(true, |&last| q > last) {
            edges.push(q);
        }
    }
    let bins = values.iter().map(|&v| bin_of(&edges, v)).collect();
    Ok(Discretization {
        edges,
        bins,
        degenerate,
    })
}

/// Bin index of `x`: the number of edges strictly below it.
pub fn bin_of(edges: &[f64], x: f64) -> usize {
    edges.partition_point(|&e| e < x)
}

/// Human-readable interval labels, one per bin.
pub fn bin_labels(edges: &[f64]) -> Vec<String> {
    if edges.is_empty() {
        return vec!["(-inf, +inf)".to_string()];
    }
    let mut labels = Vec::with_capacity(edges.len() + 1);
    labels.push(format!("(-inf, {}]", edges[0]));
    for w in edges.windows(2) {
        labels.push(format!("({}, {}]", w[0], w[1]));
    }
    labels.push(format!("({}, +inf)", edges[edges.len() - 1]));
    labels
}

// ---------------------------------------------------------------------------
// Codebook
// ---------------------------------------------------------------------------

/// Per-feature raw-value encoder.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoder {
    Categorical,
    Continuous { edges: Vec<f64> },
}

/// Everything needed to re-encode raw rows against a training schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    schema: Schema,
    encoders: Vec<Encoder>,
    pub missing_policy: MissingPolicy,
    pub label_column: String,
    pub positive_label: String,
    pub delimiter: char,
}

impl Codebook {
    pub fn new(
        schema: Schema,
        encoders: Vec<Encoder>,
        missing_policy: MissingPolicy,
        label_column: String,
        positive_label: String,
        delimiter: char,
    ) -> Result<Self> {
        if encoders.len() != schema.feature_count() {
            return Err(Error::Internal(format!(
                "{} encoders for {} features",
                encoders.len(),
                schema.feature_count()
            )));
        }
        for (j, enc) in encoders.iter().enumerate() {
            if let Encoder::Continuous { edges } = enc {
                if edges.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Data(format!(
                        "feature '{}': bin edges must be strictly increasing",
                        schema.feature(j).name()
                    )));
                }
            }
        }
        Ok(Codebook {
            schema,
            encoders,
            missing_policy,
            label_column,
            positive_label,
            delimiter,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn encoders(&self) -> &[Encoder] {
        &self.encoders
    }

    /// Encodes one raw cell for feature `j`. Unknown categories, unparseable
    /// numbers and unmapped missing cells encode as [`UNSEEN`].
    pub fn encode_cell(&self, j: usize, raw: &str) -> usize {
        if raw.is_empty() {
            return self.schema.value_index(j, MISSING_LABEL).unwrap_or(UNSEEN);
        }
        match &self.encoders[j] {
            Encoder::Categorical => self.schema.value_index(j, raw).unwrap_or(UNSEEN),
            Encoder::Continuous { edges } => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => bin_of(edges, v),
                _ => UNSEEN,
            },
        }
    }

    /// Encodes a whole delimited file against this codebook. Feature columns
    /// are located by name; rows come back in file order. Labels are read
    /// from the label column when present (and required if
    /// `require_labels`). With `apply_drop_policy`, the training-time
    /// drop-row policy is applied so evaluation matches ingestion.
    pub fn encode_delimited(
        &self,
        text: &str,
        require_labels: bool,
        apply_drop_policy: bool,
    ) -> Result<EncodedTable> {
        let rows = parse_delimited(text, self.delimiter)?;
        let (header, data) = rows
            .split_first()
            .ok_or_else(|| Error::Data("empty file".into()))?;
        if data.is_empty() {
            return Err(Error::Data("no data rows".into()));
        }
        let mut columns = Vec::with_capacity(self.schema.feature_count());
        for f in self.schema.features() {
            let idx = header.iter().position(|h| h == f.name()).ok_or_else(|| {
                Error::SchemaMismatch(format!("feature column '{}' not found", f.name()))
            })?;
            columns.push(idx);
        }
        let label_idx = header.iter().position(|h| h == &self.label_column);
        if require_labels && label_idx.is_none() {
            return Err(Error::Data(format!(
                "label column '{}' not found",
                self.label_column
            )));
        }

        let drop_missing = apply_drop_policy && self.missing_policy == MissingPolicy::DropRow;
        let mut encoded = Vec::with_capacity(data.len());
        let mut labels = label_idx.map(|_| Vec::with_capacity(data.len()));
        let mut kept_rows = Vec::with_capacity(data.len());
        for (i, row) in data.iter().enumerate() {
            if row.len() != header.len() {
                return Err(Error::Data(format!(
                    "row {}: {} cells, header has {}",
                    i + 1,
                    row.len(),
                    header.len()
                )));
            }
            if drop_missing && columns.iter().any(|&c| row[c].is_empty()) {
                continue;
            }
            encoded.push(
                columns
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| self.encode_cell(j, &row[c]))
                    .collect(),
            );
            if let (Some(labels), Some(li)) = (labels.as_mut(), label_idx) {
                let cell = &row[li];
                if cell.is_empty() {
                    return Err(Error::Data(format!("row {}: empty label cell", i + 1)));
                }
                labels.push(cell == &self.positive_label);
            }
            kept_rows.push(i);
        }
        if encoded.is_empty() {
            return Err(Error::Data(
                "no rows survived the missing-row policy".into(),
            ));
        }
        Ok(EncodedTable {
            rows: encoded,
            labels,
            source_rows: kept_rows,
        })
    }

    /// Encoded rows with labels, as a dataset (for evaluation).
    pub fn encode_labeled_dataset(&self, text: &str) -> Result<Dataset> {
        let table = self.encode_delimited(text, true, true)?;
        let labels = table.labels.expect("labels required");
        Dataset::with_unseen(self.schema.clone(), table.rows, labels)
    }
}

/// Rows encoded against a codebook; `source_rows` maps back to 0-based data
/// row numbers in the input file.
#[derive(Debug, Clone)]
pub struct EncodedTable {
    pub rows: Vec<Vec<usize>>,
    pub labels: Option<Vec<bool>>,
    pub source_rows: Vec<usize>,
}

// ---------------------------------------------------------------------------
// Codebook persistence (TOML)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CodebookFile {
    format: String,
    version: u32,
    label_column: String,
    positive_label: String,
    missing_policy: MissingPolicy,
    delimiter: char,
    features: Vec<CodebookFeature>,
}

#[derive(Serialize, Deserialize)]
struct CodebookFeature {
    name: String,
    values: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<f64>>,
}

const CODEBOOK_FORMAT: &str = "mvrs-codebook";

impl Codebook {
    pub fn to_toml(&self) -> Result<String> {
        let file = CodebookFile {
            format: CODEBOOK_FORMAT.to_string(),
            version: 1,
            label_column: self.label_column.clone(),
            positive_label: self.positive_label.clone(),
            missing_policy: self.missing_policy,
            delimiter: self.delimiter,
            features: self
                .schema
                .features()
                .iter()
                .zip(&self.encoders)
                .map(|(f, enc)| CodebookFeature {
                    name: f.name().to_string(),
                    values: f.vocabulary().to_vec(),
                    edges: match enc {
                        Encoder::Categorical => None,
                        Encoder::Continuous { edges } => Some(edges.clone()),
                    },
                })
                .collect(),
        };
        toml::to_string_pretty(&file)
            .map_err(|e| Error::Internal(format!("codebook serialization: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: CodebookFile =
            toml::from_str(text).map_err(|e| Error::Data(format!("malformed codebook: {e}")))?;
        if file.format != CODEBOOK_FORMAT {
            return Err(Error::Data(format!(
                "not a codebook file (format = '{}')",
                file.format
            )));
        }
        if file.version != 1 {
            return Err(Error::Data(format!(
                "unsupported codebook version {}",
                file.version
            )));
        }
        let schema = Schema::new(
            file.features
                .iter()
                .map(|f| (f.name.clone(), f.values.clone()))
                .collect(),
        )?;
        let encoders = file
            .features
            .into_iter()
            .map(|f| match f.edges {
                Some(edges) => Encoder::Continuous { edges },
                None => Encoder::Categorical,
            })
            .collect();
        Codebook::new(
            schema,
            encoders,
            file.missing_policy,
            file.label_column,
            file.positive_label,
            file.delimiter,
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

/// A freshly ingested dataset plus its codebook and any advisory warnings
/// (dropped rows, constant columns).
#[derive(Debug, Clone)]
pub struct Ingested {
    pub dataset: Dataset,
    pub codebook: Codebook,
    pub warnings: Vec<String>,
}

pub fn load_csv(path: impl AsRef<Path>, config: &IngestionConfig) -> Result<Ingested> {
    ingest_str(&std::fs::read_to_string(path)?, config)
}

/// Builds vocabularies (first-appearance for categorical columns, ascending
/// bins for continuous ones) and encodes every kept row. Deterministic:
/// the same text and config always produce the same dataset and codebook.
pub fn ingest_str(text: &str, config: &IngestionConfig) -> Result<Ingested> {
    config.validate()?;
    let rows = parse_delimited(text, config.delimiter)?;
    let (header, data) = rows
        .split_first()
        .ok_or_else(|| Error::Data("empty file".into()))?;
    if data.is_empty() {
        return Err(Error::Data("no data rows".into()));
    }
    for row in data.iter() {
        if row.len() != header.len() {
            return Err(Error::Data(format!(
                "ragged file: a row has {} cells, header has {}",
                row.len(),
                header.len()
            )));
        }
    }
    let label_idx = header
        .iter()
        .position(|h| h == &config.label_column)
        .ok_or_else(|| Error::Data(format!("label column '{}' not found", config.label_column)))?;
    for name in config.columns.keys() {
        if !header.iter().any(|h| h == name) {
            return Err(Error::Config(format!(
                "configured column '{name}' not present in the file"
            )));
        }
    }

    // feature columns in header order
    let feature_cols: Vec<(usize, &str, ColumnSpec)> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .filter_map(|(i, name)| {
            let spec = config
                .columns
                .get(name.as_str())
                .cloned()
                .unwrap_or(ColumnSpec::Categorical);
            (spec != ColumnSpec::Ignore).then(|| (i, name.as_str(), spec))
        })
        .collect();
    if feature_cols.is_empty() {
        return Err(Error::Data(
            "no feature columns left after exclusions".into(),
        ));
    }

    let mut warnings = Vec::new();

    // missing-row policy
    let kept: Vec<&Vec<String>> = match config.missing_policy {
        MissingPolicy::DropRow => {
            let kept: Vec<&Vec<String>> = data
                .iter()
                .filter(|row| feature_cols.iter().all(|&(i, _, _)| !row[i].is_empty()))
                .collect();
            if kept.len() < data.len() {
                warnings.push(format!(
                    "dropped {} of {} rows with missing cells",
                    data.len() - kept.len(),
                    data.len()
                ));
            }
            kept
        }
        MissingPolicy::AsCategory => data.iter().collect(),
    };
    if kept.is_empty() {
        return Err(Error::Data(
            "every row was dropped by the missing-row policy".into(),
        ));
    }

    let mut labels = Vec::with_capacity(kept.len());
    for (n, row) in kept.iter().enumerate() {
        let cell = &row[label_idx];
        if cell.is_empty() {
            return Err(Error::Data(format!(
                "row {}: unknown label value (empty cell)",
                n + 1
            )));
        }
        labels.push(cell == &config.positive_label);
    }

    let mut features: Vec<(String, Vec<String>)> = Vec::with_capacity(feature_cols.len());
    let mut encoders = Vec::with_capacity(feature_cols.len());
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(feature_cols.len());

    for &(col, name, ref spec) in &feature_cols {
        match spec {
            ColumnSpec::Categorical => {
                let mut vocab: Vec<String> = Vec::new();
                let mut cells = Vec::with_capacity(kept.len());
                for row in &kept {
                    let raw = if row[col].is_empty() {
                        MISSING_LABEL
                    } else {
                        row[col].as_str()
                    };
                    let idx = match vocab.iter().position(|v| v == raw) {
                        Some(i) => i,
                        None => {
                            vocab.push(raw.to_string());
                            vocab.len() - 1
                        }
                    };
                    cells.push(idx);
                }
                features.push((name.to_string(), vocab));
                encoders.push(Encoder::Categorical);
                columns.push(cells);
            }
            ColumnSpec::Continuous { bins } => {
                let mut numeric = Vec::with_capacity(kept.len());
                for (n, row) in kept.iter().enumerate() {
                    let raw = &row[col];
                    if raw.is_empty() {
                        continue; // handled by the missing policy below
                    }
                    match raw.parse::<f64>() {
                        Ok(v) if v.is_finite() => numeric.push(v),
                        _ => {
                            return Err(Error::Data(format!(
                                "row {}, column '{name}': unparseable cell '{raw}'",
                                n + 1
                            )))
                        }
                    }
                }
                if numeric.is_empty() {
                    return Err(Error::Data(format!(
                        "column '{name}' has no parseable values"
                    )));
                }
                let disc = discretize(&numeric, *bins)?;
                if disc.degenerate {
                    warnings.push(format!("column '{name}' is constant; using a single bin"));
                }
                let mut vocab = bin_labels(&disc.edges);
                let n_bins_built = vocab.len();
                let any_missing = kept.iter().any(|row| row[col].is_empty());
                if any_missing {
                    vocab.push(MISSING_LABEL.to_string());
                }
                let mut cells = Vec::with_capacity(kept.len());
                for row in &kept {
                    let raw = &row[col];
                    if raw.is_empty() {
                        cells.push(n_bins_built); // the missing category
                    } else {
                        let v: f64 = raw.parse().expect("validated above");
                        cells.push(bin_of(&disc.edges, v));
                    }
                }
                features.push((name.to_string(), vocab));
                encoders.push(Encoder::Continuous { edges: disc.edges });
                columns.push(cells);
            }
            ColumnSpec::Ignore => unreachable!("filtered out above"),
        }
    }

    let schema = Schema::new(features)?;
    let rows: Vec<Vec<usize>> = (0..kept.len())
        .map(|n| columns.iter().map(|c| c[n]).collect())
        .collect();
    let dataset = Dataset::new(schema.clone(), rows, labels)?;
    let codebook = Codebook::new(
        schema,
        encoders,
        config.missing_policy,
        config.label_column.clone(),
        config.positive_label.clone(),
        config.delimiter,
    )?;
    Ok(Ingested {
        dataset,
        codebook,
        warnings,
    })
}
