use ndarray::{Array2, ArrayView2, Axis};

use crate::{Error, Result};

/// Numeric design matrix with class labels.
///
/// Labels are stored as dense codes `0..J` assigned in order of first
/// appearance; `class_labels[code]` recovers the original string.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Array2<f64>,
    codes: Vec<usize>,
    class_labels: Vec<String>,
    column_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from string labels. Empty labels are treated as missing.
    pub fn new<S: AsRef<str>>(x: Array2<f64>, labels: &[S], column_names: Vec<String>) -> Result<Self> {
        let mut class_labels: Vec<String> = Vec::new();
        let mut codes = Vec::with_capacity(labels.len());
        for (row, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() {
                return Err(Error::InvalidDataset(format!("missing class label in row {row}")));
            }
            let code = match class_labels.iter().position(|c| c == label) {
                Some(code) => code,
                None => {
                    class_labels.push(label.to_string());
                    class_labels.len() - 1
                }
            };
            codes.push(code);
        }
        Self::from_codes(x, codes, class_labels, column_names)
    }

    /// Builds a dataset from precomputed dense codes.
    pub fn from_codes(
        x: Array2<f64>,
        codes: Vec<usize>,
        class_labels: Vec<String>,
        column_names: Vec<String>,
    ) -> Result<Self> {
        let (n, m) = x.dim();
        if n == 0 || m == 0 {
            return Err(Error::InvalidDataset(format!("design matrix is {n}x{m}")));
        }
        if codes.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: codes.len(),
            });
        }
        if column_names.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: column_names.len(),
            });
        }
        let j = class_labels.len();
        if j < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 classes, found {j}")));
        }
        let mut counts = vec![0usize; j];
        for &c in &codes {
            if c >= j {
                return Err(Error::InvalidDataset(format!("class code {c} out of range for {j} classes")));
            }
            counts[c] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidDataset(format!(
                "class '{}' has no observations",
                class_labels[empty]
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("design matrix contains non-finite values".into()));
        }
        Ok(Self {
            x,
            codes,
            class_labels,
            column_names,
        })
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n_obs(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &c in &self.codes {
            counts[c] += 1;
        }
        counts
    }

    /// Original label strings, one per row.
    pub fn labels(&self) -> Vec<&str> {
        self.codes.iter().map(|&c| self.class_labels[c].as_str()).collect()
    }

    /// Validates a column subset against the feature count.
    pub fn check_columns(&self, cols: &[usize]) -> Result<()> {
        if cols.is_empty() {
            return Err(Error::EmptyColumnSet);
        }
        let m = self.n_features();
        match cols.iter().find(|&&c| c >= m) {
            Some(&index) => Err(Error::ColumnOutOfRange { index, n_cols: m }),
            None => Ok(()),
        }
    }

    /// Dataset restricted to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        self.check_columns(cols)?;
        Ok(Self {
            x: self.x.select(Axis(1), cols),
            codes: self.codes.clone(),
            class_labels: self.class_labels.clone(),
            column_names: cols.iter().map(|&c| self.column_names[c].clone()).collect(),
        })
    }

    /// Dataset restricted to the given rows. Labels are re-encoded so that
    /// classes absent from the subset are dropped.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let labels: Vec<&str> = rows.iter().map(|&r| self.class_labels[self.codes[r]].as_str()).collect();
        Self::new(self.x.select(Axis(0), rows), &labels, self.column_names.clone())
    }
}
