//! Tabular data: an immutable numeric feature matrix with dense class labels.

mod csv_io;
mod cuts;
mod folds;

pub use csv_io::{encode_rows, load_csv, parse_schema, read_csv, write_csv, ColumnType, Schema};
pub use cuts::{compute_cutpoints, CutPoints};
pub use folds::{stratified_kfold, FoldAssignment};

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    /// Takes only the values 0 and 1.
    Indicator,
}

/// Where a feature column came from in the raw table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "snake_case")]
pub enum ColumnSource {
    /// Parsed directly as a number.
    Raw { column: String },
    /// One level of a one-hot expanded categorical column.
    Level { column: String, level: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: FeatureKind,
    pub source: ColumnSource,
}

impl Column {
    pub fn numeric(name: impl Into<String>) -> Self {
        let name = name.into();
        Self {
            source: ColumnSource::Raw { column: name.clone() },
            name,
            kind: FeatureKind::Numeric,
        }
    }

    pub fn indicator(name: impl Into<String>) -> Self {
        let name = name.into();
        Self {
            source: ColumnSource::Raw { column: name.clone() },
            name,
            kind: FeatureKind::Indicator,
        }
    }

    pub fn level(column: &str, level: &str) -> Self {
        Self {
            name: format!("{column}={level}"),
            kind: FeatureKind::Indicator,
            source: ColumnSource::Level {
                column: column.to_string(),
                level: level.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    features: Vec<f64>,
    n_rows: usize,
    columns: Vec<Column>,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row-major features. Every class must occur.
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        columns: Vec<Column>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let ds = Self::from_parts(rows, labels, columns, class_names)?;
        let counts = ds.class_counts();
        if let Some(c) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidDataset(format!("class {c} has no instances")));
        }
        Ok(ds)
    }

    /// Like [`Dataset::new`] but allows classes that do not occur, as in a
    /// held-out split.
    pub fn from_parts(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        columns: Vec<Column>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let n_rows = rows.len();
        let d = columns.len();
        if n_rows == 0 || d == 0 {
            return Err(Error::InvalidDataset("need at least one row and one column".into()));
        }
        if labels.len() != n_rows {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {n_rows} rows",
                labels.len()
            )));
        }
        if class_names.len() < 2 {
            return Err(Error::InvalidDataset("need at least two classes".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y >= class_names.len()) {
            return Err(Error::InvalidDataset(format!("label {bad} out of range")));
        }
        let mut features = Vec::with_capacity(n_rows * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidDataset(format!("non-finite value at row {i}, column {j}")));
                }
                if columns[j].kind == FeatureKind::Indicator && v != 0.0 && v != 1.0 {
                    return Err(Error::InvalidDataset(format!(
                        "indicator column `{}` holds {v} at row {i}",
                        columns[j].name
                    )));
                }
            }
            features.extend(row);
        }
        Ok(Self {
            features,
            n_rows,
            columns,
            labels,
            class_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.columns.len();
        &self.features[i * d..(i + 1) * d]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.columns.len() + j]
    }

    pub fn column_values(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_rows).map(move |i| self.value(i, j))
    }

    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n_classes()];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// One bitset per class marking the rows with that label.
    pub fn class_masks(&self) -> Vec<Bitset> {
        let mut masks = vec![Bitset::empty(self.n_rows); self.n_classes()];
        for (i, &y) in self.labels.iter().enumerate() {
            masks[y].insert(i);
        }
        masks
    }

    /// Rows at `indices`, in that order; column and class metadata are kept.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let d = self.n_cols();
        let mut features = Vec::with_capacity(indices.len() * d);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Self {
            features,
            n_rows: indices.len(),
            columns: self.columns.clone(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
        }
    }
}
