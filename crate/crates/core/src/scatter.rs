//! Class statistics and scatter-matrix factors for column subsets.
//!
//! `Hb` stacks `sqrt(n_j) (mean_j - mean)` rows, `Hw` stacks the observations
//! centered on their own class mean (grouped by class), so that
//! `Sb = Hb^T Hb`, `Sw = Hw^T Hw` and `St = Sb + Sw`.

use ndarray::{Array1, Array2, Axis};

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Per-class counts and means over a column subset.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub cols: Vec<usize>,
    pub class_counts: Vec<usize>,
    /// `J x m`.
    pub class_means: Array2<f64>,
    pub grand_mean: Array1<f64>,
}

/// Scatter factors and matrices for a column subset of size `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterFactors {
    /// `J x m`.
    pub hb: Array2<f64>,
    /// `N x m`.
    pub hw: Array2<f64>,
    pub sb: Array2<f64>,
    pub sw: Array2<f64>,
    pub st: Array2<f64>,
    pub n_obs: usize,
    pub n_classes: usize,
}

impl ScatterFactors {
    pub fn dim(&self) -> usize {
        self.sb.nrows()
    }
}

pub fn class_stats(data: &Dataset, cols: &[usize]) -> Result<ClassStats> {
    data.check_columns(cols)?;
    let x = data.x();
    let j = data.n_classes();
    let m = cols.len();
    let counts = data.class_counts();
    let mut sums = Array2::<f64>::zeros((j, m));
    for (row, &code) in data.codes().iter().enumerate() {
        for (k, &c) in cols.iter().enumerate() {
            sums[[code, k]] += x[[row, c]];
        }
    }
    let mut class_means = sums;
    for (mut mean_row, &count) in class_means.axis_iter_mut(Axis(0)).zip(&counts) {
        mean_row /= count as f64;
    }
    let n = data.n_obs() as f64;
    let mut grand_mean = Array1::<f64>::zeros(m);
    for (mean_row, &count) in class_means.axis_iter(Axis(0)).zip(&counts) {
        grand_mean.scaled_add(count as f64 / n, &mean_row);
    }
    Ok(ClassStats {
        cols: cols.to_vec(),
        class_counts: counts,
        class_means,
        grand_mean,
    })
}

fn check_stats(data: &Dataset, stats: &ClassStats, cols: &[usize]) -> Result<()> {
    data.check_columns(cols)?;
    if stats.class_means.ncols() != cols.len() || stats.cols != cols {
        return Err(Error::DimensionMismatch {
            expected: cols.len(),
            actual: stats.class_means.ncols(),
        });
    }
    if stats.class_counts.len() != data.n_classes() {
        return Err(Error::DimensionMismatch {
            expected: data.n_classes(),
            actual: stats.class_counts.len(),
        });
    }
    Ok(())
}

/// `Hb` and `Hw` without the `m x m` products. Used by the ULDA fit, where
/// forming `Sw` would cost `O(N m^2)` for nothing.
pub fn between_within_factors(data: &Dataset, stats: &ClassStats, cols: &[usize]) -> Result<(Array2<f64>, Array2<f64>)> {
    check_stats(data, stats, cols)?;
    let j = data.n_classes();
    let m = cols.len();
    let mut hb = Array2::<f64>::zeros((j, m));
    for class in 0..j {
        let w = (stats.class_counts[class] as f64).sqrt();
        for k in 0..m {
            hb[[class, k]] = w * (stats.class_means[[class, k]] - stats.grand_mean[k]);
        }
    }

    let x = data.x();
    let mut order: Vec<usize> = (0..data.n_obs()).collect();
    order.sort_by_key(|&r| data.codes()[r]);
    let mut hw = Array2::<f64>::zeros((data.n_obs(), m));
    for (out_row, &row) in order.iter().enumerate() {
        let code = data.codes()[row];
        for (k, &c) in cols.iter().enumerate() {
            hw[[out_row, k]] = x[[row, c]] - stats.class_means[[code, k]];
        }
    }
    Ok((hb, hw))
}

pub fn scatter_factors(data: &Dataset, stats: &ClassStats, cols: &[usize]) -> Result<ScatterFactors> {
    let (hb, hw) = between_within_factors(data, stats, cols)?;
    let sb = hb.t().dot(&hb);
    let sw = hw.t().dot(&hw);
    let st = &sb + &sw;
    Ok(ScatterFactors {
        hb,
        hw,
        sb,
        sw,
        st,
        n_obs: data.n_obs(),
        n_classes: data.n_classes(),
    })
}

/// Class statistics and scatter factors in one call.
pub fn scatter_for(data: &Dataset, cols: &[usize]) -> Result<ScatterFactors> {
    let stats = class_stats(data, cols)?;
    scatter_factors(data, &stats, cols)
}

/// Centered copies of every column, computed once per dataset.
///
/// Sub-blocks of `St`, `Sw` and `Sb` for any column subset are inner products
/// of these columns, which is what the forward-selection search consumes.
#[derive(Debug, Clone)]
pub struct Deviations {
    /// `N x M`, observations minus the grand mean.
    pub total: Array2<f64>,
    /// `N x M`, observations minus their class mean.
    pub within: Array2<f64>,
    /// `J x M`, rows `sqrt(n_j) (mean_j - mean)`.
    pub between: Array2<f64>,
}

impl Deviations {
    pub fn new(data: &Dataset) -> Self {
        let all: Vec<usize> = (0..data.n_features()).collect();
        let stats = class_stats(data, &all).expect("full column set is valid");
        let x = data.x();
        let total = &x - &stats.grand_mean.view().insert_axis(Axis(0));
        let mut within = x.to_owned();
        for (mut row, &code) in within.axis_iter_mut(Axis(0)).zip(data.codes()) {
            row -= &stats.class_means.row(code);
        }
        let mut between = Array2::<f64>::zeros((data.n_classes(), all.len()));
        for (class, mut row) in between.axis_iter_mut(Axis(0)).enumerate() {
            let w = (stats.class_counts[class] as f64).sqrt();
            row.assign(&((&stats.class_means.row(class) - &stats.grand_mean) * w));
        }
        Self { total, within, between }
    }

    /// `St[a, b]`.
    pub fn total_dot(&self, a: usize, b: usize) -> f64 {
        self.total.column(a).dot(&self.total.column(b))
    }

    /// `Sw[a, b]`.
    pub fn within_dot(&self, a: usize, b: usize) -> f64 {
        self.within.column(a).dot(&self.within.column(b))
    }

    /// `Sb` restricted to `cols`.
    pub fn between_block(&self, cols: &[usize]) -> Array2<f64> {
        let hb = self.between.select(Axis(1), cols);
        hb.t().dot(&hb)
    }
}
