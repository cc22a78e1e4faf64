use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{FitMeta, UldaModel};
use crate::{Error, Result};

pub const MODEL_VERSION: u32 = 1;

/// Row-major dense matrix with explicit dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixDoc {
    pub fn from_array(a: &Array2<f64>) -> Self {
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            data: a.iter().copied().collect(),
        }
    }

    pub fn to_array(&self) -> Result<Array2<f64>> {
        Array2::from_shape_vec((self.rows, self.cols), self.data.clone()).map_err(|_| Error::DimensionMismatch {
            expected: self.rows * self.cols,
            actual: self.data.len(),
        })
    }
}

/// On-disk form of [`UldaModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub version: u32,
    pub labels: Vec<String>,
    pub priors: Vec<f64>,
    #[serde(rename = "W")]
    pub w: MatrixDoc,
    pub alpha_sq: Vec<f64>,
    pub beta_sq: Vec<f64>,
    pub clamped_var: Vec<f64>,
    pub projected_means: MatrixDoc,
    pub column_names: Vec<String>,
    pub fit_meta: FitMeta,
}

impl UldaModel {
    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            version: MODEL_VERSION,
            labels: self.class_labels.clone(),
            priors: self.priors.to_vec(),
            w: MatrixDoc::from_array(&self.w),
            alpha_sq: self.alpha_sq.to_vec(),
            beta_sq: self.beta_sq.to_vec(),
            clamped_var: self.clamped_var.to_vec(),
            projected_means: MatrixDoc::from_array(&self.projected_means),
            column_names: self.column_names.clone(),
            fit_meta: self.meta.clone(),
        }
    }

    pub fn from_doc(doc: ModelDoc) -> Result<Self> {
        if doc.version != MODEL_VERSION {
            return Err(Error::UnsupportedVersion(doc.version));
        }
        let w = doc.w.to_array()?;
        let projected_means = doc.projected_means.to_array()?;
        let j = doc.labels.len();
        let t2 = w.ncols();
        let consistent = doc.priors.len() == j
            && doc.alpha_sq.len() == t2
            && doc.beta_sq.len() == t2
            && doc.clamped_var.len() == t2
            && projected_means.dim() == (j, t2)
            && doc.column_names.len() == w.nrows();
        if !consistent {
            return Err(Error::SchemaMismatch("model document fields have inconsistent sizes".into()));
        }
        Ok(Self {
            w,
            alpha_sq: Array1::from(doc.alpha_sq),
            beta_sq: Array1::from(doc.beta_sq),
            clamped_var: Array1::from(doc.clamped_var),
            projected_means,
            priors: Array1::from(doc.priors),
            class_labels: doc.labels,
            column_names: doc.column_names,
            meta: doc.fit_meta,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Serialization(e.to_string()))?;
        Self::from_json(&text)
    }
}
