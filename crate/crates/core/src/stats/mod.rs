//! Multivariate test statistics on scatter factors.

pub mod special;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::linalg::{cholesky, psd_rank, solve_lower, sym_eigenvalues};
use crate::scatter::ScatterFactors;
use crate::{Error, Result};

pub use special::{beta_cdf, beta_quantile, beta_sf, f_cdf, f_sf, ln_beta, ln_gamma};

/// Slack allowed on either side of the natural range before clamping.
pub const CLAMP_TOL: f64 = 1e-8;

/// A candidate whose Schur complement is at most this fraction of its total
/// scatter is treated as a linear combination of the included columns.
pub const DEPENDENCY_TOL: f64 = 1e-10;

/// Effective class counts at or below `1 + MAX_TRACE_TOL` leave no room for
/// further discriminant directions.
pub const MAX_TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionKind {
    Pillai,
    Wilks,
    PartialWilks,
    PartialF,
}

/// A statistic value tagged with the criterion that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionValue {
    pub kind: CriterionKind,
    pub value: f64,
}

impl CriterionValue {
    /// Validates `value` against the range of `kind` for `n_classes` classes.
    pub fn new(kind: CriterionKind, value: f64, n_classes: usize) -> Result<Self> {
        let upper = match kind {
            CriterionKind::Pillai => (n_classes.max(1) - 1) as f64,
            CriterionKind::Wilks | CriterionKind::PartialWilks => 1.0,
            CriterionKind::PartialF => f64::INFINITY,
        };
        if value.is_nan() || value < 0.0 || value > upper {
            return Err(Error::Domain(format!("{kind:?} value {value} outside [0, {upper}]")));
        }
        Ok(Self { kind, value })
    }
}

/// Inclusion threshold for one forward-selection step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    pub alpha: f64,
    pub n_candidates: usize,
    pub n_obs: usize,
    pub j_effective: f64,
    pub threshold: f64,
}

fn check_full_rank(f: &ScatterFactors) -> Result<Array2<f64>> {
    full_rank_cholesky(f.st.view(), f.n_obs)
}

/// Cholesky factor of `st` after the numerical rank check.
fn full_rank_cholesky(st: ArrayView2<'_, f64>, n_obs: usize) -> Result<Array2<f64>> {
    let m = st.nrows();
    let rank = psd_rank(st, n_obs)?;
    if rank < m {
        return Err(Error::SingularScatter { rank, dim: m });
    }
    cholesky(st).ok_or(Error::SingularScatter { rank: m - 1, dim: m })
}

fn clamp_near(value: f64, lo: f64, hi: f64) -> f64 {
    if value < lo && value >= lo - CLAMP_TOL {
        lo
    } else if value > hi && value <= hi + CLAMP_TOL {
        hi
    } else {
        value
    }
}

/// Pillai's trace `V = trace(St^{-1} Sb) = ||L^{-1} Hb^T||_F^2` with `St = L L^T`.
pub fn pillai_trace(f: &ScatterFactors) -> Result<f64> {
    pillai_from_blocks(f.st.view(), f.hb.view(), f.n_obs, f.n_classes)
}

/// [`pillai_trace`] from `St` and `Hb` alone.
pub(crate) fn pillai_from_blocks(
    st: ArrayView2<'_, f64>,
    hb: ArrayView2<'_, f64>,
    n_obs: usize,
    n_classes: usize,
) -> Result<f64> {
    let l = full_rank_cholesky(st, n_obs)?;
    let y = solve_lower(l.view(), hb.t());
    let v = y.iter().map(|x| x * x).sum::<f64>();
    Ok(clamp_near(v, 0.0, (n_classes - 1) as f64))
}

/// Result of [`pillai_increment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PillaiIncrement {
    pub value: f64,
    /// Schur complement relative to the candidate's total scatter.
    pub schur_ratio: f64,
    /// The candidate is (numerically) a linear combination of the included columns.
    pub dependent: bool,
}

/// Increase in Pillai's trace from appending one candidate column.
///
/// `tx` is the included block of `St`, `t_col` the candidate's cross terms
/// with it, `tz` its diagonal entry, and `sb_full` the `Sb` block over the
/// included columns followed by the candidate.
pub fn pillai_increment(
    tx: ArrayView2<'_, f64>,
    t_col: ArrayView1<'_, f64>,
    tz: f64,
    sb_full: ArrayView2<'_, f64>,
) -> Result<PillaiIncrement> {
    let m = tx.nrows();
    if tx.ncols() != m || t_col.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: t_col.len() });
    }
    if sb_full.dim() != (m + 1, m + 1) {
        return Err(Error::DimensionMismatch { expected: m + 1, actual: sb_full.nrows() });
    }
    let coef = if m == 0 {
        Array1::zeros(0)
    } else {
        let l = cholesky(tx).ok_or(Error::SingularScatter { rank: m - 1, dim: m })?;
        solve_cholesky(&l, t_col)
    };
    increment_from_coef(coef.view(), t_col, tz, sb_full)
}

/// Solves `L L^T x = b`.
pub(crate) fn solve_cholesky(l: &Array2<f64>, b: ArrayView1<'_, f64>) -> Array1<f64> {
    let rhs = b.insert_axis(Axis(1));
    let y = solve_lower(l.view(), rhs);
    crate::linalg::solve_upper(l.t(), y.view()).index_axis_move(Axis(1), 0)
}

/// Increment given the regression coefficients `coef = Tx^{-1} tx`.
pub(crate) fn increment_from_coef(
    coef: ArrayView1<'_, f64>,
    t_col: ArrayView1<'_, f64>,
    tz: f64,
    sb_full: ArrayView2<'_, f64>,
) -> Result<PillaiIncrement> {
    let schur = tz - t_col.dot(&coef);
    let m = coef.len();
    let mut a = Array1::<f64>::zeros(m + 1);
    a.slice_mut(ndarray::s![..m]).assign(&coef);
    a[m] = -1.0;
    let num = a.dot(&sb_full.dot(&a));
    Ok(increment_from_parts(num, schur, tz))
}

/// Increment `num / schur` with `num = a Sb a^T` and `schur` the candidate's
/// Schur complement in `St`.
pub(crate) fn increment_from_parts(num: f64, schur: f64, tz: f64) -> PillaiIncrement {
    if !(tz > 0.0) {
        return PillaiIncrement { value: 0.0, schur_ratio: 0.0, dependent: true };
    }
    let ratio = schur / tz;
    if ratio <= DEPENDENCY_TOL {
        return PillaiIncrement { value: 0.0, schur_ratio: ratio.max(0.0), dependent: true };
    }
    PillaiIncrement { value: (num / schur).max(0.0), schur_ratio: ratio, dependent: false }
}

/// Squared within-class singular values `beta^2`: eigenvalues of
/// `L^{-1} Sw L^{-T}` where `St = L L^T`, ascending.
pub fn beta_squared(f: &ScatterFactors) -> Result<Vec<f64>> {
    let l = check_full_rank(f)?;
    beta_squared_with(&l, f)
}

fn beta_squared_with(l: &Array2<f64>, f: &ScatterFactors) -> Result<Vec<f64>> {
    let y = solve_lower(l.view(), f.hw.t());
    let g = y.dot(&y.t());
    sym_eigenvalues(g.view())
}

/// Wilks' lambda `det(Sw) / det(St)`; exactly 0 when some `beta^2` vanishes.
pub fn wilks_lambda(f: &ScatterFactors) -> Result<f64> {
    let l_t = check_full_rank(f)?;
    let beta_sq = beta_squared_with(&l_t, f)?;
    let tol = f.n_obs.max(f.dim()) as f64 * f64::EPSILON;
    if beta_sq.iter().any(|&b| b <= tol) {
        return Ok(0.0);
    }
    let lambda = match cholesky(f.sw.view()) {
        Some(l_w) => (2.0 * (log_diag(&l_w) - log_diag(&l_t))).exp(),
        None => beta_sq.iter().product(),
    };
    Ok(lambda.clamp(0.0, 1.0))
}

fn log_diag(l: &Array2<f64>) -> f64 {
    l.diag().iter().map(|d| d.ln()).sum()
}

/// Partial lambda `lambda_with / lambda_without`, clamped to `[0, 1]`.
pub fn partial_wilks(lambda_with: f64, lambda_without: f64) -> Result<f64> {
    if lambda_without.is_nan() || lambda_with.is_nan() {
        return Err(Error::Domain("partial lambda of NaN".into()));
    }
    if lambda_without <= 0.0 {
        return Err(Error::IllDefinedPartialLambda);
    }
    Ok((lambda_with / lambda_without).clamp(0.0, 1.0))
}

/// Partial F statistic and its upper-tail p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialF {
    pub f_stat: f64,
    pub p_value: f64,
}

/// `F = ((N - J - p) / (J - 1)) (1 - lambda) / lambda` against `F(J - 1, N - J - p)`.
pub fn partial_f(partial_lambda: f64, n_obs: usize, n_classes: usize, p: usize) -> Result<PartialF> {
    let df2 = n_obs as i64 - n_classes as i64 - p as i64;
    if df2 < 1 {
        return Err(Error::NonPositiveDegreesOfFreedom(df2));
    }
    if n_classes < 2 {
        return Err(Error::Domain(format!("partial F needs at least 2 classes, got {n_classes}")));
    }
    if !(0.0..=1.0).contains(&partial_lambda) {
        return Err(Error::Domain(format!("partial lambda {partial_lambda} outside [0, 1]")));
    }
    if partial_lambda == 0.0 {
        return Ok(PartialF { f_stat: f64::INFINITY, p_value: 0.0 });
    }
    let df1 = (n_classes - 1) as f64;
    let df2 = df2 as f64;
    let f_stat = (df2 / df1) * (1.0 - partial_lambda) / partial_lambda;
    let p_value = f_sf(f_stat, df1, df2)?;
    Ok(PartialF { f_stat, p_value })
}

/// Threshold for the Pillai increment at one selection step: the
/// `(1 - alpha)^(1/l)` quantile of `Beta((J' - 1) / 2, (N - J') / 2)`.
pub fn selection_threshold(alpha: f64, n_candidates: usize, j_effective: f64, n_obs: usize) -> Result<ThresholdSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    if n_candidates == 0 {
        return Err(Error::Domain("no candidates left".into()));
    }
    if j_effective.is_nan() || j_effective <= 1.0 + MAX_TRACE_TOL {
        return Err(Error::MaxTraceReached { j_effective });
    }
    let n = n_obs as f64;
    if n <= j_effective {
        return Err(Error::NonPositiveDegreesOfFreedom((n - j_effective).floor() as i64));
    }
    let q = (1.0 - alpha).powf(1.0 / n_candidates as f64);
    let threshold = beta_quantile(q, (j_effective - 1.0) / 2.0, (n - j_effective) / 2.0)?;
    Ok(ThresholdSpec { alpha, n_candidates, n_obs, j_effective, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::scatter_for;
    use crate::Dataset;
    use ndarray::{array, s};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(m: usize) -> Vec<String> {
        (0..m).map(|i| format!("x{i}")).collect()
    }

    fn random_dataset(n: usize, m: usize, j: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Array2::from_shape_fn((n, m), |_| rng.random::<f64>() * 4.0 - 2.0);
        let codes: Vec<usize> = (0..n).map(|i| i % j).collect();
        let labels = (0..j).map(|c| format!("c{c}")).collect();
        Dataset::from_codes(x, codes, labels, names(m)).unwrap()
    }

    /// Symmetric inverse via Gauss-Jordan, independent of the Cholesky path.
    fn gauss_jordan_inverse(a: &Array2<f64>) -> Array2<f64> {
        let n = a.nrows();
        let mut aug = Array2::<f64>::zeros((n, 2 * n));
        aug.slice_mut(s![.., ..n]).assign(a);
        for i in 0..n {
            aug[[i, n + i]] = 1.0;
        }
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| aug[[x, col]].abs().total_cmp(&aug[[y, col]].abs())).unwrap();
            for k in 0..2 * n {
                aug.swap([col, k], [pivot, k]);
            }
            let p = aug[[col, col]];
            aug.row_mut(col).mapv_inplace(|v| v / p);
            for r in 0..n {
                if r != col {
                    let factor = aug[[r, col]];
                    let pivot_row = aug.row(col).to_owned();
                    aug.row_mut(r).scaled_add(-factor, &pivot_row);
                }
            }
        }
        aug.slice(s![.., n..]).to_owned()
    }

    /// Eigenvalues of a general real matrix with real spectrum, by unshifted QR iteration.
    fn qr_iteration_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
        let n = a.nrows();
        let mut m = a.clone();
        for _ in 0..2000 {
            // Gram-Schmidt QR
            let mut q = Array2::<f64>::zeros((n, n));
            let mut r = Array2::<f64>::zeros((n, n));
            for j in 0..n {
                let mut v = m.column(j).to_owned();
                for i in 0..j {
                    let qi = q.column(i).to_owned();
                    r[[i, j]] = qi.dot(&m.column(j));
                    v.scaled_add(-r[[i, j]], &qi);
                }
                r[[j, j]] = v.dot(&v).sqrt();
                if r[[j, j]] > 0.0 {
                    q.column_mut(j).assign(&(&v / r[[j, j]]));
                }
            }
            m = r.dot(&q);
        }
        m.diag().to_vec()
    }

    #[test]
    fn zero_between_scatter_gives_zero_trace() {
        let x = array![[1.0], [2.0], [1.0], [2.0]];
        let d = Dataset::new(x, &["a", "a", "b", "b"], names(1)).unwrap();
        let f = scatter_for(&d, &[0]).unwrap();
        assert!(pillai_trace(&f).unwrap().abs() < 1e-15);
        assert!((wilks_lambda(&f).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn class_indicator_contributes_unit_trace() {
        let n = 200;
        let j = 10;
        let codes: Vec<usize> = (0..n).map(|i| i % j).collect();
        let x = Array2::from_shape_fn((n, 1), |(i, _)| if codes[i] == 1 { 1.0 } else { 0.0 });
        let d = Dataset::from_codes(x, codes, (0..j).map(|c| c.to_string()).collect(), names(1)).unwrap();
        let f = scatter_for(&d, &[0]).unwrap();
        assert!((pillai_trace(&f).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(wilks_lambda(&f).unwrap(), 0.0);
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let d = random_dataset(40, 3, 3, 7);
        let f = scatter_for(&d, &[0, 1, 2]).unwrap();
        let prod = gauss_jordan_inverse(&f.st).dot(&f.sb);
        let eig: f64 = qr_iteration_eigenvalues(&prod).iter().sum();
        assert!((pillai_trace(&f).unwrap() - eig).abs() < 1e-10);
    }

    #[test]
    fn singular_total_scatter_is_reported() {
        let mut d = random_dataset(30, 2, 3, 1);
        let mut x = d.x().to_owned();
        let c0 = x.column(0).to_owned();
        x.column_mut(1).assign(&(&c0 * 2.0));
        d = Dataset::from_codes(x, d.codes().to_vec(), d.class_labels().to_vec(), names(2)).unwrap();
        let f = scatter_for(&d, &[0, 1]).unwrap();
        assert!(matches!(pillai_trace(&f), Err(Error::SingularScatter { .. })));
        assert!(matches!(wilks_lambda(&f), Err(Error::SingularScatter { .. })));
    }

    fn increment_for(d: &Dataset, base: &[usize], cand: usize) -> PillaiIncrement {
        let mut all = base.to_vec();
        all.push(cand);
        let f = scatter_for(d, &all).unwrap();
        let m = base.len();
        pillai_increment(
            f.st.slice(s![..m, ..m]),
            f.st.slice(s![..m, m]),
            f.st[[m, m]],
            f.sb.view(),
        )
        .unwrap()
    }

    #[test]
    fn increment_with_uncorrelated_candidate_is_ratio() {
        let x = array![[0.0], [1.0], [2.0], [3.0], [5.0], [4.0]];
        let d = Dataset::new(x, &["a", "a", "b", "b", "c", "c"], names(1)).unwrap();
        let f = scatter_for(&d, &[0]).unwrap();
        let inc = pillai_increment(
            Array2::zeros((0, 0)).view(),
            Array1::zeros(0).view(),
            f.st[[0, 0]],
            f.sb.view(),
        )
        .unwrap();
        assert!((inc.value - f.sb[[0, 0]] / f.st[[0, 0]]).abs() < 1e-15);

        // Block-diagonal St with tx = 0 gives the same ratio.
        let tx = array![[2.0]];
        let sb = array![[0.5, 0.1], [0.1, 0.3]];
        let inc = pillai_increment(tx.view(), array![0.0].view(), 1.5, sb.view()).unwrap();
        assert!((inc.value - 0.3 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn duplicate_candidate_is_dependent() {
        let d = random_dataset(30, 3, 3, 5);
        let mut x = d.x().to_owned();
        let c1 = x.column(1).to_owned();
        x.column_mut(2).assign(&c1);
        let d = Dataset::from_codes(x, d.codes().to_vec(), d.class_labels().to_vec(), names(3)).unwrap();
        let inc = increment_for(&d, &[0, 1], 2);
        assert!(inc.dependent);
        assert_eq!(inc.value, 0.0);
    }

    #[test]
    fn increment_matches_full_recompute() {
        for seed in 0..20 {
            let d = random_dataset(35, 4, 3, seed);
            let inc = increment_for(&d, &[0, 1, 2], 3);
            let full = pillai_trace(&scatter_for(&d, &[0, 1, 2, 3]).unwrap()).unwrap();
            let base = pillai_trace(&scatter_for(&d, &[0, 1, 2]).unwrap()).unwrap();
            assert!((inc.value - (full - base)).abs() < 1e-8);
        }
    }

    #[test]
    fn wilks_zero_for_zero_within_scatter() {
        let x = array![[0.0], [0.0], [1.0], [1.0]];
        let d = Dataset::new(x, &["a", "a", "b", "b"], names(1)).unwrap();
        assert_eq!(wilks_lambda(&scatter_for(&d, &[0]).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn wilks_is_product_of_generalized_eigenvalues() {
        let d = random_dataset(50, 2, 3, 11);
        let f = scatter_for(&d, &[0, 1]).unwrap();
        // det(Sw - b St) = 0 as a scalar quadratic in b.
        let (w, t) = (&f.sw, &f.st);
        let qa = t[[0, 0]] * t[[1, 1]] - t[[0, 1]] * t[[1, 0]];
        let qb = -(w[[0, 0]] * t[[1, 1]] + w[[1, 1]] * t[[0, 0]] - w[[0, 1]] * t[[1, 0]] - w[[1, 0]] * t[[0, 1]]);
        let qc = w[[0, 0]] * w[[1, 1]] - w[[0, 1]] * w[[1, 0]];
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let (b1, b2) = ((-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa));
        assert!((wilks_lambda(&f).unwrap() - b1 * b2).abs() < 1e-12);
    }

    #[test]
    fn single_column_duality() {
        for seed in 0..10 {
            let d = random_dataset(25, 1, 4, seed);
            let f = scatter_for(&d, &[0]).unwrap();
            let v = pillai_trace(&f).unwrap();
            let l = wilks_lambda(&f).unwrap();
            assert!((v + l - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_lambda_arithmetic() {
        assert!((partial_wilks(0.2, 0.5).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(partial_wilks(0.3, 0.3).unwrap(), 1.0);
        assert_eq!(partial_wilks(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(partial_wilks(0.1, 0.0), Err(Error::IllDefinedPartialLambda));
    }

    #[test]
    fn partial_f_edges() {
        let r = partial_f(1.0, 150, 3, 0).unwrap();
        assert_eq!(r.f_stat, 0.0);
        assert_eq!(r.p_value, 1.0);
        let r = partial_f(0.0, 150, 3, 0).unwrap();
        assert!(r.f_stat.is_infinite() && r.p_value == 0.0);
        assert!(matches!(partial_f(0.5, 5, 3, 2), Err(Error::NonPositiveDegreesOfFreedom(0))));
    }

    #[test]
    fn partial_f_matches_density_quadrature() {
        let r = partial_f(0.9, 150, 3, 1).unwrap();
        let (d1, d2) = (2.0_f64, 146.0_f64);
        assert!((r.f_stat - 146.0 / 2.0 * 0.1 / 0.9).abs() < 1e-12);
        // F(2, d2) density is closed-form: (1 + 2x/d2)^{-(d2/2 + 1)}.
        let dens = |x: f64| (1.0 + d1 * x / d2).powf(-(d2 / 2.0 + 1.0));
        let upper = 200.0;
        let steps = 200_000;
        let h = (upper - r.f_stat) / steps as f64;
        let mut acc = dens(r.f_stat) + dens(upper);
        for k in 1..steps {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * dens(r.f_stat + k as f64 * h);
        }
        let tail = acc * h / 3.0;
        assert!((r.p_value - tail).abs() < 1e-10);
    }

    #[test]
    fn threshold_examples() {
        let t = selection_threshold(0.05, 1, 3.0, 150).unwrap();
        assert!((t.threshold - beta_quantile(0.95, 1.0, 73.5).unwrap()).abs() < 1e-15);
        assert!((t.threshold - (1.0 - 0.05f64.powf(1.0 / 73.5))).abs() < 1e-12);
        let t2 = selection_threshold(0.05, 1, 2.0, 150).unwrap();
        assert!((beta_cdf(t2.threshold, 0.5, 74.0).unwrap() - 0.95).abs() < 1e-10);
        let mut last = 0.0;
        for l in 1..20 {
            let t = selection_threshold(0.05, l, 2.5, 150).unwrap().threshold;
            assert!(t > last);
            last = t;
        }
        assert!(matches!(selection_threshold(0.05, 3, 1.0 + 1e-9, 150), Err(Error::MaxTraceReached { .. })));
    }

    #[test]
    fn criterion_value_ranges() {
        assert!(CriterionValue::new(CriterionKind::Pillai, 2.0, 3).is_ok());
        assert!(CriterionValue::new(CriterionKind::Pillai, 2.5, 3).is_err());
        assert!(CriterionValue::new(CriterionKind::Wilks, 1.2, 3).is_err());
        assert!(CriterionValue::new(CriterionKind::PartialF, f64::INFINITY, 3).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn trace_is_monotone_under_column_addition(
            n in 12usize..60, m in 1usize..7, j in 2usize..5, seed in any::<u64>(), order_seed in any::<u64>()
        ) {
            let d = random_dataset(n, m, j, seed);
            let mut cols: Vec<usize> = (0..m).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
            for i in (1..m).rev() {
                cols.swap(i, rng.random_range(0..=i));
            }
            let mut prev = 0.0;
            for k in 1..=m {
                let v = pillai_trace(&scatter_for(&d, &cols[..k]).unwrap()).unwrap();
                prop_assert!(v >= prev - 1e-9);
                prop_assert!(v <= (j - 1) as f64 + 1e-9);
                prev = v;
            }
        }
    }
}
