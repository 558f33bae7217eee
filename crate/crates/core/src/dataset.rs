use std::fmt;

use crate::error::{Error, Result};

/// Binary class label. `Positive` is the `+1` class (the points `y_i`),
/// `Negative` the `-1` class (the points `z_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_sign(value: i64) -> Option<Label> {
        match value {
            1 => Some(Label::Positive),
            -1 => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.sign())
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Positive => f.write_str("+1"),
            Label::Negative => f.write_str("-1"),
        }
    }
}

/// A dense feature matrix with one `±1` label per row.
///
/// Features are stored row-major. Construction validates that every value
/// is finite, that there is at least one attribute, and that the label
/// vector matches the row count.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<f64>,
    labels: Vec<Label>,
    dim: usize,
}

impl LabeledDataset {
    /// Builds a dataset from a flat row-major feature buffer.
    pub fn from_flat(dim: usize, features: Vec<f64>, labels: Vec<Label>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("at least one attribute is required".into()));
        }
        if features.len() != dim * labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} feature values do not fill {} rows of dimension {}",
                features.len(),
                labels.len(),
                dim
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(LabeledDataset {
            features,
            labels,
            dim,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<Label>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidDataset(format!(
                "row {bad} has {} values, expected {dim}",
                rows[bad].len()
            )));
        }
        let features = rows.iter().flatten().copied().collect();
        Self::from_flat(dim, features, labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of attributes `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.features[index * self.dim..(index + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.dim)
    }

    pub fn label(&self, index: usize) -> Label {
        self.labels[index]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Row indices belonging to `label`, in dataset order.
    pub fn indices_of(&self, label: Label) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == label).collect()
    }

    pub fn without_row(&self, index: usize) -> LabeledDataset {
        let mut features = Vec::with_capacity(self.features.len() - self.dim);
        let mut labels = Vec::with_capacity(self.len() - 1);
        for (i, (row, &label)) in self.rows().zip(&self.labels).enumerate() {
            if i != index {
                features.extend_from_slice(row);
                labels.push(label);
            }
        }
        LabeledDataset {
            features,
            labels,
            dim: self.dim,
        }
    }

    /// Keeps only the listed attribute columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<LabeledDataset> {
        if columns.is_empty() {
            return Err(Error::InvalidDataset("column selection is empty".into()));
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad + 1,
            });
        }
        let features = self
            .rows()
            .flat_map(|r| columns.iter().map(move |&c| r[c]))
            .collect();
        Ok(LabeledDataset {
            features,
            labels: self.labels.clone(),
            dim: columns.len(),
        })
    }

    /// Reorders rows so that row `i` of the result is row `order[i]` here.
    pub fn permuted(&self, order: &[usize]) -> LabeledDataset {
        let features = order.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        let labels = order.iter().map(|&i| self.labels[i]).collect();
        LabeledDataset {
            features,
            labels,
            dim: self.dim,
        }
    }

    /// Same features with every label flipped.
    pub fn with_flipped_labels(&self) -> LabeledDataset {
        LabeledDataset {
            features: self.features.clone(),
            labels: self.labels.iter().map(|l| l.opposite()).collect(),
            dim: self.dim,
        }
    }
}
