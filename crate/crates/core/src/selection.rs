//! Greedy forward variable selection.
//!
//! Pillai's trace is the proposed criterion: a candidate enters when its trace
//! increment exceeds a Beta quantile adjusted for the number of remaining
//! candidates and the trace already explained. The two Wilks' lambda criteria
//! use the partial F test and are kept for comparison.

use std::fmt;

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::linalg::cholesky;
use crate::scatter::Deviations;
use crate::stats::{
    increment_from_parts, partial_f, pillai_from_blocks, selection_threshold, solve_cholesky, PillaiIncrement,
    MAX_TRACE_TOL,
};
use crate::{Dataset, Error, Result};

/// Below this relative Schur complement the incremental update is replaced
/// by a full recomputation.
const ILL_CONDITIONED_RATIO: f64 = 1e-6;

/// Statistics within this relative distance count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Pillai,
    Wilks,
    WilksBonferroni,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Pillai => "pillai",
            Criterion::Wilks => "wilks",
            Criterion::WilksBonferroni => "wilks-bonferroni",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub criterion: Criterion,
    pub alpha: f64,
    /// Upper bound on the number of selected columns.
    pub max_steps: Option<usize>,
}

impl SelectionConfig {
    pub fn new(criterion: Criterion) -> Self {
        Self {
            criterion,
            alpha: 0.05,
            max_steps: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = Some(max_steps);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        Ok(())
    }

    fn step_cap(&self, n_obs: usize, n_classes: usize, n_features: usize) -> usize {
        let natural = match self.criterion {
            Criterion::Pillai => n_features,
            Criterion::Wilks | Criterion::WilksBonferroni => {
                n_features.min((n_obs as i64 - n_classes as i64 - 1).max(0) as usize)
            }
        };
        self.max_steps.map_or(natural, |cap| cap.min(natural))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// The best candidate failed the inclusion test.
    ThresholdNotMet,
    /// The effective class count `J - V` reached 1.
    MaxTraceReached,
    /// Every column was selected.
    AllSelected,
    /// Wilks' lambda of the selected set reached 0.
    WilksZeroStop,
    /// Nothing passed the first test; every column is returned.
    NoneSignificantReturnAll,
    /// The configured or degrees-of-freedom step cap was hit.
    MaxStepsReached,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::ThresholdNotMet => "threshold not met",
            StopReason::MaxTraceReached => "maximum Pillai's trace reached",
            StopReason::AllSelected => "all columns selected",
            StopReason::WilksZeroStop => "Wilks' lambda reached zero",
            StopReason::NoneSignificantReturnAll => "no significant column, returning all",
            StopReason::MaxStepsReached => "step cap reached",
        })
    }
}

/// One evaluated selection step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub column: usize,
    pub name: String,
    /// Number of candidates `l` considered at this step.
    pub candidate_count: usize,
    /// Pillai increment or partial F of the best candidate.
    pub best_statistic: f64,
    /// Pillai increment threshold, or the p-value cutoff for the Wilks criteria.
    pub threshold: f64,
    /// Pillai's trace of the selected set after this step.
    pub pillai_after: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilks_after: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub criterion: Criterion,
    pub alpha: f64,
    pub selected: Vec<usize>,
    pub selected_names: Vec<String>,
    /// Accepted steps in order.
    pub trajectory: Vec<StepRecord>,
    /// The step whose best candidate failed the test, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected_step: Option<StepRecord>,
    pub stop_reason: StopReason,
}

impl SelectionResult {
    /// Number of columns that passed the inclusion test.
    pub fn n_significant(&self) -> usize {
        self.trajectory.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for SelectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stat = match self.criterion {
            Criterion::Pillai => "increment",
            _ => "partial F",
        };
        writeln!(f, "forward selection ({}, alpha = {})", self.criterion, self.alpha)?;
        writeln!(
            f,
            "{:>4}  {:<20} {:>5} {:>12} {:>12} {:>12}",
            "step", "column", "l", stat, "threshold", "pillai"
        )?;
        let rows = self.trajectory.iter().map(|r| (r, true)).chain(self.rejected_step.iter().map(|r| (r, false)));
        for (i, (r, accepted)) in rows.enumerate() {
            let marker = if accepted { "" } else { "  (rejected)" };
            writeln!(
                f,
                "{:>4}  {:<20} {:>5} {:>12.6} {:>12.6} {:>12.6}{}",
                i + 1,
                r.name,
                r.candidate_count,
                r.best_statistic,
                r.threshold,
                r.pillai_after,
                marker
            )?;
        }
        write!(f, "stop: {}; selected: {}", self.stop_reason, self.selected_names.join(", "))
    }
}

/// Incremental scatter bookkeeping over a growing selected set.
struct Engine<'a> {
    data: &'a Dataset,
    dev: Deviations,
    total_diag: Array1<f64>,
    within_diag: Array1<f64>,
    selected: Vec<usize>,
    /// `St[:, selected]`, `M x k`.
    st_cols: Vec<Array1<f64>>,
    /// `Sw[:, selected]`, filled only for the Wilks criteria.
    sw_cols: Vec<Array1<f64>>,
    track_within: bool,
}

impl<'a> Engine<'a> {
    fn new(data: &'a Dataset, track_within: bool) -> Self {
        let dev = Deviations::new(data);
        let total_diag = dev.total.map_axis(Axis(0), |c| c.dot(&c));
        let within_diag = dev.within.map_axis(Axis(0), |c| c.dot(&c));
        Self {
            data,
            dev,
            total_diag,
            within_diag,
            selected: Vec::new(),
            st_cols: Vec::new(),
            sw_cols: Vec::new(),
            track_within,
        }
    }

    fn remaining(&self) -> Vec<usize> {
        (0..self.data.n_features()).filter(|c| !self.selected.contains(c)).collect()
    }

    fn add(&mut self, col: usize) {
        self.selected.push(col);
        let c = self.dev.total.column(col);
        self.st_cols.push(self.dev.total.t().dot(&c));
        if self.track_within {
            let c = self.dev.within.column(col);
            self.sw_cols.push(self.dev.within.t().dot(&c));
        }
    }

    /// `S[selected, selected]` from cached columns.
    fn block(cols: &[Array1<f64>], selected: &[usize]) -> Array2<f64> {
        let k = selected.len();
        Array2::from_shape_fn((k, k), |(i, j)| cols[j][selected[i]])
    }

    fn cross(cols: &[Array1<f64>], z: usize) -> Array1<f64> {
        Array1::from_iter(cols.iter().map(|c| c[z]))
    }

    fn pillai_of(&self, cols: &[usize]) -> Result<f64> {
        let k = cols.len();
        let st = Array2::from_shape_fn((k, k), |(i, j)| self.dev.total_dot(cols[i], cols[j]));
        let hb = self.dev.between.select(Axis(1), cols);
        pillai_from_blocks(st.view(), hb.view(), self.data.n_obs(), self.data.n_classes())
    }

    fn pillai_selected(&self) -> Result<f64> {
        if self.selected.is_empty() {
            return Ok(0.0);
        }
        let st = Self::block(&self.st_cols, &self.selected);
        let hb = self.dev.between.select(Axis(1), &self.selected);
        pillai_from_blocks(st.view(), hb.view(), self.data.n_obs(), self.data.n_classes())
    }

    /// Pillai increments of every remaining candidate, in index order.
    fn pillai_candidates(&self, current: f64) -> Result<Vec<(usize, PillaiIncrement)>> {
        let k = self.selected.len();
        let chol = if k == 0 {
            None
        } else {
            let tx = Self::block(&self.st_cols, &self.selected);
            Some(cholesky(tx.view()).ok_or(Error::SingularScatter { rank: k - 1, dim: k })?)
        };
        let hb_sel = self.dev.between.select(Axis(1), &self.selected);
        let mut out = Vec::new();
        for z in self.remaining() {
            let tz = self.total_diag[z];
            let (coef, schur) = match &chol {
                None => (Array1::zeros(0), tz),
                Some(l) => {
                    let t_col = Self::cross(&self.st_cols, z);
                    let coef = solve_cholesky(l, t_col.view());
                    let schur = tz - t_col.dot(&coef);
                    (coef, schur)
                }
            };
            // a Sb a^T = || Hb_sel coef - hb_z ||^2
            let resid = hb_sel.dot(&coef) - &self.dev.between.column(z);
            let num = resid.dot(&resid);
            let mut inc = increment_from_parts(num, schur, tz);
            if !inc.dependent && inc.schur_ratio < ILL_CONDITIONED_RATIO {
                let mut cols = self.selected.clone();
                cols.push(z);
                inc = match self.pillai_of(&cols) {
                    Ok(v) => PillaiIncrement {
                        value: (v - current).max(0.0),
                        ..inc
                    },
                    Err(Error::SingularScatter { .. }) => PillaiIncrement {
                        value: 0.0,
                        dependent: true,
                        ..inc
                    },
                    Err(e) => return Err(e),
                };
            }
            out.push((z, inc));
        }
        Ok(out)
    }

    /// Partial Wilks' lambda of every remaining candidate, `None` for
    /// candidates dependent on the selected set.
    fn partial_lambdas(&self) -> Result<Vec<(usize, Option<f64>)>> {
        let k = self.selected.len();
        let n = self.data.n_obs();
        let factors = if k == 0 {
            None
        } else {
            let tx = Self::block(&self.st_cols, &self.selected);
            let wx = Self::block(&self.sw_cols, &self.selected);
            let lt = cholesky(tx.view()).ok_or(Error::SingularScatter { rank: k - 1, dim: k })?;
            let lw = cholesky(wx.view()).ok_or(Error::IllDefinedPartialLambda)?;
            Some((lt, lw))
        };
        let zero_tol = n.max(k + 1) as f64 * f64::EPSILON;
        let mut out = Vec::new();
        for z in self.remaining() {
            let tz = self.total_diag[z];
            let wz = self.within_diag[z];
            let (schur_t, schur_w) = match &factors {
                None => (tz, wz),
                Some((lt, lw)) => {
                    let t_col = Self::cross(&self.st_cols, z);
                    let w_col = Self::cross(&self.sw_cols, z);
                    let ct = solve_cholesky(lt, t_col.view());
                    let cw = solve_cholesky(lw, w_col.view());
                    (tz - t_col.dot(&ct), wz - w_col.dot(&cw))
                }
            };
            if !(tz > 0.0) || schur_t / tz <= crate::stats::DEPENDENCY_TOL {
                out.push((z, None));
                continue;
            }
            let ratio = (schur_w / schur_t).clamp(0.0, 1.0);
            out.push((z, Some(if ratio <= zero_tol { 0.0 } else { ratio })));
        }
        Ok(out)
    }

    fn names(&self, cols: &[usize]) -> Vec<String> {
        cols.iter().map(|&c| self.data.column_names()[c].clone()).collect()
    }
}

fn better(candidate: f64, best: f64) -> bool {
    if best == f64::NEG_INFINITY {
        return true;
    }
    if candidate.is_infinite() || best.is_infinite() {
        return candidate > best;
    }
    candidate > best + TIE_TOL * best.abs().max(1.0)
}

fn none_significant(data: &Dataset, config: &SelectionConfig, rejected: Option<StepRecord>) -> SelectionResult {
    let all: Vec<usize> = (0..data.n_features()).collect();
    SelectionResult {
        criterion: config.criterion,
        alpha: config.alpha,
        selected_names: all.iter().map(|&c| data.column_names()[c].clone()).collect(),
        selected: all,
        trajectory: Vec::new(),
        rejected_step: rejected,
        stop_reason: StopReason::NoneSignificantReturnAll,
    }
}

fn check_degenerate(engine: &Engine<'_>) -> Result<()> {
    if engine.total_diag.iter().all(|&t| t <= 0.0) {
        return Err(Error::AllColumnsConstant);
    }
    Ok(())
}

/// Forward selection under `config`.
pub fn forward_select(data: &Dataset, config: &SelectionConfig) -> Result<SelectionResult> {
    config.validate()?;
    match config.criterion {
        Criterion::Pillai => select_pillai(data, config),
        Criterion::Wilks | Criterion::WilksBonferroni => select_wilks(data, config),
    }
}

fn select_pillai(data: &Dataset, config: &SelectionConfig) -> Result<SelectionResult> {
    let mut engine = Engine::new(data, false);
    check_degenerate(&engine)?;
    let n = data.n_obs();
    let j = data.n_classes() as f64;
    let cap = config.step_cap(n, data.n_classes(), data.n_features());
    let mut previous = 0.0;
    let mut trajectory = Vec::new();
    let mut rejected = None;

    let stop = loop {
        let pool = engine.remaining();
        if pool.is_empty() {
            break StopReason::AllSelected;
        }
        if engine.selected.len() >= cap {
            break StopReason::MaxStepsReached;
        }
        let j_eff = j - previous;
        if j_eff <= 1.0 + MAX_TRACE_TOL {
            break StopReason::MaxTraceReached;
        }
        let l = pool.len();
        let spec = match selection_threshold(config.alpha, l, j_eff, n) {
            Ok(spec) => spec,
            Err(Error::MaxTraceReached { .. }) => break StopReason::MaxTraceReached,
            Err(e) => return Err(e),
        };
        let candidates = engine.pillai_candidates(previous)?;
        let mut best: Option<(usize, f64)> = None;
        for (z, inc) in &candidates {
            if best.is_none_or(|(_, b)| better(inc.value, b)) {
                best = Some((*z, inc.value));
            }
        }
        let (z, value) = best.expect("pool is nonempty");
        let mut record = StepRecord {
            column: z,
            name: data.column_names()[z].clone(),
            candidate_count: l,
            best_statistic: value,
            threshold: spec.threshold,
            pillai_after: previous + value,
            p_value: None,
            wilks_after: None,
        };
        if value <= spec.threshold {
            rejected = Some(record);
            break StopReason::ThresholdNotMet;
        }
        engine.add(z);
        previous = match engine.pillai_selected() {
            Ok(v) => v,
            Err(Error::SingularScatter { .. }) => {
                log::warn!("full recomputation after adding column {z} was singular; using the increment");
                previous + value
            }
            Err(e) => return Err(e),
        };
        record.pillai_after = previous;
        log::debug!("selected column {z} (increment {value:.6}, threshold {:.6})", spec.threshold);
        trajectory.push(record);
    };

    if trajectory.is_empty() {
        return Ok(none_significant(data, config, rejected));
    }
    Ok(SelectionResult {
        criterion: config.criterion,
        alpha: config.alpha,
        selected_names: engine.names(&engine.selected),
        selected: engine.selected,
        trajectory,
        rejected_step: rejected,
        stop_reason: stop,
    })
}

fn select_wilks(data: &Dataset, config: &SelectionConfig) -> Result<SelectionResult> {
    let mut engine = Engine::new(data, true);
    check_degenerate(&engine)?;
    let n = data.n_obs();
    let jc = data.n_classes();
    let cap = config.step_cap(n, jc, data.n_features());
    let bonferroni = config.criterion == Criterion::WilksBonferroni;
    let mut lambda = 1.0;
    let mut trajectory = Vec::new();
    let mut rejected = None;

    let stop = loop {
        let pool = engine.remaining();
        if pool.is_empty() {
            break StopReason::AllSelected;
        }
        if engine.selected.len() >= cap {
            break StopReason::MaxStepsReached;
        }
        let l = pool.len();
        let k = engine.selected.len();
        // Smallest partial lambda is the largest partial F at a fixed step.
        let mut best: Option<(usize, f64)> = None;
        for (z, pl) in engine.partial_lambdas()? {
            if let Some(pl) = pl {
                if best.is_none_or(|(_, b)| better(-pl, -b)) {
                    best = Some((z, pl));
                }
            }
        }
        let Some((z, pl)) = best else {
            break StopReason::ThresholdNotMet;
        };
        let pf = partial_f(pl, n, jc, k)?;
        let adjusted = if bonferroni { pf.p_value * l as f64 } else { pf.p_value };
        let cutoff = if bonferroni { config.alpha / l as f64 } else { config.alpha };
        let mut record = StepRecord {
            column: z,
            name: data.column_names()[z].clone(),
            candidate_count: l,
            best_statistic: pf.f_stat,
            threshold: cutoff,
            pillai_after: f64::NAN,
            p_value: Some(pf.p_value),
            wilks_after: Some(lambda * pl),
        };
        if adjusted >= config.alpha {
            rejected = Some(record);
            break StopReason::ThresholdNotMet;
        }
        engine.add(z);
        lambda *= pl;
        record.pillai_after = engine.pillai_selected().unwrap_or(f64::NAN);
        trajectory.push(record);
        if lambda <= 0.0 {
            break StopReason::WilksZeroStop;
        }
    };

    if trajectory.is_empty() {
        return Ok(none_significant(data, config, rejected));
    }
    Ok(SelectionResult {
        criterion: config.criterion,
        alpha: config.alpha,
        selected_names: engine.names(&engine.selected),
        selected: engine.selected,
        trajectory,
        rejected_step: rejected,
        stop_reason: stop,
    })
}

/// One entry of a full greedy ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedVariable {
    pub column: usize,
    pub name: String,
    /// Pillai increment, or partial F for the Wilks criteria.
    pub statistic: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
}

/// Orders every column by greedy forward inclusion, ignoring stopping rules.
///
/// Columns that can no longer contribute (dependent on earlier ones, or
/// after Wilks' lambda has reached 0) follow in index order with statistic 0.
pub fn rank_variables(data: &Dataset, criterion: Criterion) -> Result<Vec<RankedVariable>> {
    let wilks = criterion != Criterion::Pillai;
    let mut engine = Engine::new(data, wilks);
    check_degenerate(&engine)?;
    let n = data.n_obs();
    let jc = data.n_classes();
    let mut previous = 0.0;
    let mut lambda = 1.0;
    let mut out = Vec::new();

    while !engine.remaining().is_empty() {
        let best = if wilks {
            if lambda <= 0.0 {
                None
            } else {
                let mut best: Option<(usize, f64)> = None;
                for (z, pl) in engine.partial_lambdas()? {
                    if let Some(pl) = pl {
                        if best.is_none_or(|(_, b)| better(-pl, -b)) {
                            best = Some((z, pl));
                        }
                    }
                }
                best.map(|(z, pl)| {
                    let pf = partial_f(pl, n, jc, engine.selected.len()).ok();
                    lambda *= pl;
                    (z, pf.map_or(f64::NAN, |p| p.f_stat), pf.map(|p| p.p_value))
                })
            }
        } else {
            let mut best: Option<(usize, f64)> = None;
            for (z, inc) in engine.pillai_candidates(previous)? {
                if !inc.dependent && best.is_none_or(|(_, b)| better(inc.value, b)) {
                    best = Some((z, inc.value));
                }
            }
            best.map(|(z, v)| (z, v, None))
        };
        match best {
            Some((z, statistic, p_value)) => {
                engine.add(z);
                if !wilks {
                    previous = engine.pillai_selected().unwrap_or(previous + statistic);
                }
                out.push(RankedVariable {
                    column: z,
                    name: data.column_names()[z].clone(),
                    statistic,
                    p_value,
                });
            }
            None => {
                for z in engine.remaining() {
                    out.push(RankedVariable {
                        column: z,
                        name: data.column_names()[z].clone(),
                        statistic: 0.0,
                        p_value: None,
                    });
                }
                break;
            }
        }
    }
    Ok(out)
}
