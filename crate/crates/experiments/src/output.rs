//! CSV output. File names carry the study name and the seed.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::Result;

/// `<dir>/<study>_seed<seed>.csv`.
pub fn csv_path(dir: &Path, study: &str, seed: u64) -> PathBuf {
    dir.join(format!("{study}_seed{seed}.csv"))
}

/// Writes `rows` with a header row, creating `dir` if needed.
pub fn write_rows<T: Serialize>(dir: &Path, study: &str, seed: u64, rows: &[T]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = csv_path(dir, study, seed);
    let mut w = csv::Writer::from_path(&path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(path)
}
