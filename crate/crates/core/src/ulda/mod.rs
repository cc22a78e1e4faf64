//! Uncorrelated LDA fitted through the generalized SVD of `(Hb, Hw)`, and the
//! Gaussian discriminant classifier on the resulting scores.

mod io;

pub use io::{MatrixDoc, ModelDoc, MODEL_VERSION};

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::linalg::{complete_orthogonal_decomposition, default_rank_tol, qr_r_factor, solve_upper, thin_svd};
use crate::scatter::{between_within_factors, class_stats};
use crate::{Dataset, Error, Result};

/// Directions with `beta^2` at or below this are treated as perfectly separating.
pub const SEPARATION_TOL: f64 = 1e-8;

/// Within-class variance substituted on perfectly separating directions.
pub const CLAMPED_VARIANCE: f64 = 1e-5;

/// Which factor of the within-class scatter enters the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitPath {
    /// Decompose `[Hb; Hw]`, of height `J + N`.
    Plain,
    /// Replace `Hw` by the `R` factor of its reduced QR, of height `J + min(N, M)`.
    #[default]
    QrReduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitMeta {
    pub n_obs: usize,
    pub n_classes: usize,
    pub n_features: usize,
    /// Numerical rank of `St`.
    pub rank_total: usize,
    pub path: FitPath,
}

/// A fitted ULDA classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct UldaModel {
    pub(crate) w: Array2<f64>,
    pub(crate) alpha_sq: Array1<f64>,
    pub(crate) beta_sq: Array1<f64>,
    pub(crate) clamped_var: Array1<f64>,
    pub(crate) projected_means: Array2<f64>,
    pub(crate) priors: Array1<f64>,
    pub(crate) class_labels: Vec<String>,
    pub(crate) column_names: Vec<String>,
    pub(crate) meta: FitMeta,
}

/// Misclassification costs; `C[[i, j]]` is the cost of predicting `i` when the truth is `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    c: Array2<f64>,
}

impl CostMatrix {
    pub fn new(c: Array2<f64>) -> Result<Self> {
        let (r, k) = c.dim();
        if r != k || r < 2 {
            return Err(Error::InvalidCostMatrix(format!("expected a square matrix of size >= 2, got {r}x{k}")));
        }
        if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidCostMatrix("entries must be finite and nonnegative".into()));
        }
        for j in 0..k {
            let col = c.column(j);
            if col.iter().any(|&v| v < col[j]) {
                return Err(Error::InvalidCostMatrix(format!(
                    "correct classification of class {j} costs more than a misclassification"
                )));
            }
        }
        Ok(Self { c })
    }

    /// The 0-1 loss `1 - I`.
    pub fn zero_one(n_classes: usize) -> Self {
        Self {
            c: Array2::from_shape_fn((n_classes, n_classes), |(i, j)| if i == j { 0.0 } else { 1.0 }),
        }
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.c.view()
    }

    pub fn n_classes(&self) -> usize {
        self.c.nrows()
    }

    /// Index minimizing the expected cost `sum_j C[i][j] p_j`; ties go to the lower index.
    pub fn decide(&self, posterior: ArrayView1<'_, f64>) -> usize {
        let costs = self.c.dot(&posterior);
        argmin(costs.view())
    }
}

fn argmin(v: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}

fn argmax(v: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn validate_priors(priors: &[f64], n_classes: usize) -> Result<Array1<f64>> {
    if priors.len() != n_classes {
        return Err(Error::InvalidPriors(format!("expected {n_classes} priors, got {}", priors.len())));
    }
    if priors.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidPriors("priors must be finite and nonnegative".into()));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidPriors(format!("priors sum to {total}, not 1")));
    }
    Ok(Array1::from_iter(priors.iter().map(|p| p / total)))
}

/// Fits ULDA on all columns with the QR-reduced path.
///
/// `priors` defaults to the empirical class proportions.
pub fn fit_ulda(data: &Dataset, priors: Option<&[f64]>) -> Result<UldaModel> {
    fit_ulda_with(data, priors, FitPath::QrReduced)
}

/// Fits ULDA on all columns with an explicit decomposition path.
pub fn fit_ulda_with(data: &Dataset, priors: Option<&[f64]>, path: FitPath) -> Result<UldaModel> {
    let n = data.n_obs();
    let j = data.n_classes();
    let m = data.n_features();
    if n < j {
        return Err(Error::InvalidDataset(format!("{n} observations for {j} classes")));
    }
    let cols: Vec<usize> = (0..m).collect();
    let stats = class_stats(data, &cols)?;
    let x = data.x();
    let constant = (0..m).all(|c| {
        let first = x[[0, c]];
        x.column(c).iter().all(|&v| v == first)
    });
    if constant {
        return Err(Error::AllColumnsConstant);
    }

    let (hb, hw) = between_within_factors(data, &stats, &cols)?;
    let lower = match path {
        FitPath::Plain => hw,
        FitPath::QrReduced => qr_r_factor(hw.view()),
    };
    let mut k = Array2::<f64>::zeros((j + lower.nrows(), m));
    k.slice_mut(s![..j, ..]).assign(&hb);
    k.slice_mut(s![j.., ..]).assign(&lower);
    drop(lower);

    let tol = default_rank_tol(n, m);
    let cod = complete_orthogonal_decomposition(k.view(), tol);
    drop(k);
    let t1 = cod.rank();
    if t1 == 0 {
        return Err(Error::AllColumnsConstant);
    }

    let p_top = cod.p_leading_rows(j);
    let svd = thin_svd(p_top.view())?;
    // Singular values here are cosines in [0, 1], so the relative rank test
    // is taken against max(sigma_max, 1).
    let sigma_max = svd.s.iter().cloned().fold(0.0, f64::max).max(1.0);
    let t2 = svd.s.iter().take_while(|&&sv| sv > tol * sigma_max).count();

    let v2 = svd.v.slice(s![.., ..t2]).to_owned();
    let rinv_v = solve_upper(cod.r().view(), v2.view());
    let mut w = cod.q_leading().dot(&rinv_v);
    for mut col in w.axis_iter_mut(Axis(1)) {
        let lead = col.iter().cloned().fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if lead < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }

    let alpha_sq = Array1::from_iter(svd.s.iter().take(t2).map(|sv| (sv * sv).min(1.0)));
    let beta_sq = alpha_sq.mapv(|a| (1.0 - a).max(0.0));
    let clamped_var = beta_sq.mapv(|b| if b <= SEPARATION_TOL { CLAMPED_VARIANCE } else { b });
    let projected_means = stats.class_means.dot(&w);

    let priors = match priors {
        Some(p) => validate_priors(p, j)?,
        None => Array1::from_iter(stats.class_counts.iter().map(|&c| c as f64 / n as f64)),
    };

    Ok(UldaModel {
        w,
        alpha_sq,
        beta_sq,
        clamped_var,
        projected_means,
        priors,
        class_labels: data.class_labels().to_vec(),
        column_names: data.column_names().to_vec(),
        meta: FitMeta {
            n_obs: n,
            n_classes: j,
            n_features: m,
            rank_total: t1,
            path,
        },
    })
}

impl UldaModel {
    /// `M x t2` transformation matrix.
    pub fn w(&self) -> ArrayView2<'_, f64> {
        self.w.view()
    }

    pub fn alpha_sq(&self) -> ArrayView1<'_, f64> {
        self.alpha_sq.view()
    }

    pub fn beta_sq(&self) -> ArrayView1<'_, f64> {
        self.beta_sq.view()
    }

    pub fn clamped_var(&self) -> ArrayView1<'_, f64> {
        self.clamped_var.view()
    }

    pub fn projected_means(&self) -> ArrayView2<'_, f64> {
        self.projected_means.view()
    }

    pub fn priors(&self) -> ArrayView1<'_, f64> {
        self.priors.view()
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn meta(&self) -> &FitMeta {
        &self.meta
    }

    /// Number of discriminant directions `t2`.
    pub fn n_directions(&self) -> usize {
        self.w.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_labels.len()
    }

    /// Returns a copy with different priors.
    pub fn with_priors(&self, priors: &[f64]) -> Result<Self> {
        let mut model = self.clone();
        model.priors = validate_priors(priors, self.n_classes())?;
        Ok(model)
    }

    fn check_width(&self, cols: usize) -> Result<()> {
        if cols != self.w.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.w.nrows(),
                actual: cols,
            });
        }
        Ok(())
    }

    /// Discriminant scores `X W`.
    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        self.check_width(x.ncols())?;
        Ok(x.dot(&self.w))
    }

    /// Per-direction variance of the pooled within-class covariance estimate.
    fn direction_variance(&self) -> Array1<f64> {
        let dof = self.meta.n_obs.saturating_sub(self.meta.n_classes).max(1) as f64;
        self.clamped_var.mapv(|v| v / dof)
    }

    fn discriminants_from_scores(&self, scores: ArrayView2<'_, f64>) -> Array2<f64> {
        let var = self.direction_variance();
        // Sigma^{-1} mu_j for each class, J x t2.
        let scaled = &self.projected_means / &var;
        let offset: Array1<f64> = Array1::from_iter(
            self.projected_means
                .outer_iter()
                .zip(scaled.outer_iter())
                .zip(self.priors.iter())
                .map(|((mu, smu), &pi)| -0.5 * mu.dot(&smu) + pi.ln()),
        );
        let mut delta = scores.dot(&scaled.t());
        delta += &offset;
        delta
    }

    /// Linear discriminant values `delta_j`, one row per observation.
    pub fn discriminants(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let scores = self.transform(x)?;
        Ok(self.discriminants_from_scores(scores.view()))
    }

    /// Posterior class probabilities for each row of `x`.
    pub fn posterior_matrix(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let mut delta = self.discriminants(x)?;
        for mut row in delta.outer_iter_mut() {
            softmax_in_place(row.view_mut());
        }
        Ok(delta)
    }

    /// Posterior class probabilities for one observation.
    pub fn posterior(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let row = x.insert_axis(Axis(0));
        Ok(self.posterior_matrix(row)?.index_axis_move(Axis(0), 0))
    }

    /// Predicted class codes; maximum posterior, or minimum expected cost when `costs` is given.
    pub fn predict_codes(&self, x: ArrayView2<'_, f64>, costs: Option<&CostMatrix>) -> Result<Vec<usize>> {
        if let Some(c) = costs {
            if c.n_classes() != self.n_classes() {
                return Err(Error::InvalidCostMatrix(format!(
                    "cost matrix is {0}x{0} but the model has {1} classes",
                    c.n_classes(),
                    self.n_classes()
                )));
            }
        }
        let post = self.posterior_matrix(x)?;
        Ok(post
            .outer_iter()
            .map(|p| match costs {
                Some(c) => c.decide(p),
                None => argmax(p),
            })
            .collect())
    }

    /// Predicted class labels.
    pub fn predict(&self, x: ArrayView2<'_, f64>, costs: Option<&CostMatrix>) -> Result<Vec<String>> {
        Ok(self
            .predict_codes(x, costs)?
            .into_iter()
            .map(|c| self.class_labels[c].clone())
            .collect())
    }

    /// Fraction of rows of `data` classified correctly.
    pub fn accuracy(&self, data: &Dataset) -> Result<f64> {
        let pred = self.predict(data.x(), None)?;
        let hits = pred.iter().zip(data.labels()).filter(|(p, t)| p.as_str() == *t).count();
        Ok(hits as f64 / data.n_obs() as f64)
    }
}

fn softmax_in_place(mut row: ndarray::ArrayViewMut1<'_, f64>) {
    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    row.mapv_inplace(|d| (d - max).exp());
    let total: f64 = row.sum();
    row.mapv_inplace(|e| e / total);
}
