//! CSV ingestion and small file helpers.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fwdlda::preprocess::RawTable;
use fwdlda::CostMatrix;
use ndarray::Array2;

/// Reads a headed CSV into a table of strings.
pub fn read_table(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let names: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: record {}", path.display(), i + 1))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(RawTable::new(names, rows)?)
}

/// Sibling file sharing the stem of `model`: `model.json` -> `model.<suffix>`.
pub fn sidecar(model: &Path, suffix: &str) -> PathBuf {
    model.with_extension(suffix)
}

/// Parses a cost CSV whose header holds the true labels and whose rows start
/// with the predicted label. Rows and columns are reordered to `labels`.
pub fn read_costs(path: &Path, labels: &[String]) -> Result<CostMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = reader.headers()?.iter().skip(1).map(|h| h.trim().to_string()).collect();
    let j = labels.len();
    let col_of = |name: &str| labels.iter().position(|l| l == name);
    let mut c = Array2::<f64>::from_elem((j, j), f64::NAN);
    for rec in reader.records() {
        let rec = rec?;
        let mut fields = rec.iter();
        let predicted = fields.next().unwrap_or("").trim();
        let i = col_of(predicted).with_context(|| format!("cost row '{predicted}' is not a class label"))?;
        for (name, value) in header.iter().zip(fields) {
            let k = col_of(name).with_context(|| format!("cost column '{name}' is not a class label"))?;
            c[[i, k]] = value.trim().parse().with_context(|| format!("cost '{value}' is not a number"))?;
        }
    }
    if c.iter().any(|v| v.is_nan()) {
        bail!("cost matrix must list every (predicted, true) pair over labels {labels:?}");
    }
    Ok(CostMatrix::new(c)?)
}

/// Parses `--priors`: `empirical`, a comma list in class order, or `label=value` pairs.
pub fn parse_priors(spec: &str, labels: &[String]) -> Result<Option<Vec<f64>>> {
    if spec.trim() == "empirical" {
        return Ok(None);
    }
    let items: Vec<&str> = spec.split(',').map(str::trim).collect();
    if items.len() != labels.len() {
        bail!("--priors lists {} values for {} classes {labels:?}", items.len(), labels.len());
    }
    let mut priors = vec![f64::NAN; labels.len()];
    for (pos, item) in items.iter().enumerate() {
        let (idx, value) = match item.split_once('=') {
            Some((label, v)) => (
                labels.iter().position(|l| l == label.trim()).with_context(|| format!("unknown class '{label}'"))?,
                v,
            ),
            None => (pos, *item),
        };
        priors[idx] = value.trim().parse().with_context(|| format!("prior '{value}' is not a number"))?;
    }
    if priors.iter().any(|p| p.is_nan()) {
        bail!("--priors must give one value per class");
    }
    Ok(Some(priors))
}

/// Splits a comma list, dropping empty items.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}
