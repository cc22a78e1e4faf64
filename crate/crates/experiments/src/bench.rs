//! Wall-time comparison of the plain and QR-reduced ULDA fits.

use std::time::Instant;

use fwdlda::ulda::{fit_ulda_with, FitPath};
use serde::Serialize;

use crate::data::null_design;
use crate::{replicate_rng, Error, Result};

pub const DEFAULT_N: usize = 10_000;
pub const DEFAULT_CLASSES: usize = 10;
pub const DEFAULT_M_LIST: [usize; 10] = [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub seed: u64,
    pub rep: usize,
    pub path: FitPath,
    pub seconds: f64,
    /// Both paths predicted identical labels on the training rows.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub median_plain: f64,
    pub median_qr: f64,
    /// `median_plain / median_qr`.
    pub speedup: f64,
    pub all_agree: bool,
}

fn timed_fit(data: &fwdlda::Dataset, path: FitPath) -> Result<(f64, Vec<usize>)> {
    let start = Instant::now();
    let model = fit_ulda_with(data, None, path)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok((seconds, model.predict_codes(data.x(), None)?))
}

/// Times both fit paths on `N x M` standard-normal data with `J` classes.
///
/// Runs sequentially; the order of the two paths alternates between replicates.
pub fn bench_ulda(n: usize, j: usize, m_list: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if reps == 0 || n < j {
        return Err(Error::Invalid("need reps >= 1 and N >= J".into()));
    }
    let mut rows = Vec::new();
    for (mi, &m) in m_list.iter().enumerate() {
        for rep in 0..reps {
            let mut rng = replicate_rng(seed, ((mi as u64) << 32) | rep as u64);
            let data = null_design(n, j, m, &mut rng);
            let order = if rep % 2 == 0 {
                [FitPath::Plain, FitPath::QrReduced]
            } else {
                [FitPath::QrReduced, FitPath::Plain]
            };
            let mut results = Vec::with_capacity(2);
            for path in order {
                let (seconds, pred) = timed_fit(&data, path)?;
                results.push((path, seconds, pred));
            }
            let agree = results[0].2 == results[1].2;
            for (path, seconds, _) in results {
                rows.push(BenchRow { n, m, j, seed, rep, path, seconds, agree });
            }
            log::info!("bench N={n} M={m} rep={rep} done");
        }
    }
    Ok(rows)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Per-`M` medians and speedups.
pub fn summarize_bench(rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut ms: Vec<(usize, usize)> = Vec::new();
    for r in rows {
        if !ms.contains(&(r.n, r.m)) {
            ms.push((r.n, r.m));
        }
    }
    ms.into_iter()
        .map(|(n, m)| {
            let pick = |path| -> Vec<f64> {
                rows.iter().filter(|r| r.n == n && r.m == m && r.path == path).map(|r| r.seconds).collect()
            };
            let plain = pick(FitPath::Plain);
            let qr = pick(FitPath::QrReduced);
            let reps = plain.len();
            let (median_plain, median_qr) = (median(plain), median(qr));
            BenchSummary {
                n,
                m,
                reps,
                median_plain,
                median_qr,
                speedup: median_plain / median_qr,
                all_agree: rows.iter().filter(|r| r.n == n && r.m == m).all(|r| r.agree),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_agrees() {
        let rows = bench_ulda(300, 4, &[2, 16], 2, 1).unwrap();
        assert_eq!(rows.len(), 8);
        let s = summarize_bench(&rows);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|r| r.all_agree && r.reps == 2));
    }
}
