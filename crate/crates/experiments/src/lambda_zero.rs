//! Designs where some class grouping is perfectly separable, so Wilks' lambda
//! hits 0 and the Wilks criteria stop early.

use fwdlda::crossval::{cross_validate, mean_accuracy};
use fwdlda::selection::{forward_select, Criterion, SelectionConfig};
use fwdlda::{fit_ulda, Dataset};
use serde::Serialize;

use crate::data::{binary_separable, masked_split, one_hot};
use crate::{replicate_rng, Result};

pub const CV_FOLDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaZeroRow {
    pub scenario: &'static str,
    pub criterion: String,
    pub seed: u64,
    pub n_obs: usize,
    pub n_classes: usize,
    pub n_features: usize,
    pub n_selected: usize,
    /// Selected column names joined by `;`.
    pub selected: String,
    pub stop_reason: String,
    pub final_pillai: f64,
    pub train_accuracy: f64,
    /// Mean accuracy over folds, with selection refitted inside each fold.
    pub cv_accuracy: f64,
    /// Training accuracy restricted to classes B and C (masked-split design only).
    pub bc_accuracy: Option<f64>,
}

fn evaluate(scenario: &'static str, data: &Dataset, criterion: Criterion, seed: u64) -> Result<LambdaZeroRow> {
    let cfg = SelectionConfig::new(criterion);
    let sel = forward_select(data, &cfg)?;
    let sub = data.select_columns(&sel.selected)?;
    let model = fit_ulda(&sub, None)?;
    let train_accuracy = model.accuracy(&sub)?;
    let cv_accuracy = mean_accuracy(&cross_validate(data, CV_FOLDS, seed, Some(&cfg))?);
    let bc_accuracy = if scenario == "masked-split" {
        let pred = model.predict(sub.x(), None)?;
        let (mut hits, mut total) = (0usize, 0usize);
        for (p, t) in pred.iter().zip(data.labels()) {
            if t == "B" || t == "C" {
                total += 1;
                hits += (p == t) as usize;
            }
        }
        Some(hits as f64 / total as f64)
    } else {
        None
    };
    Ok(LambdaZeroRow {
        scenario,
        criterion: criterion.to_string(),
        seed,
        n_obs: data.n_obs(),
        n_classes: data.n_classes(),
        n_features: data.n_features(),
        n_selected: sel.selected.len(),
        selected: sel.selected_names.join(";"),
        stop_reason: format!("{:?}", sel.stop_reason),
        final_pillai: sel.trajectory.last().map_or(f64::NAN, |s| s.pillai_after),
        train_accuracy,
        cv_accuracy,
        bc_accuracy,
    })
}

/// Runs the one-hot, masked-split and binary designs through the Pillai and Wilks criteria.
pub fn sim_lambda_zero(seed: u64) -> Result<Vec<LambdaZeroRow>> {
    let designs: Vec<(&'static str, Dataset)> = vec![
        ("one-hot", one_hot(2000, 10)),
        ("masked-split", masked_split(50, &mut replicate_rng(seed, 0))),
        ("binary-separable", binary_separable(100, 3, &mut replicate_rng(seed, 1))),
    ];
    let mut rows = Vec::new();
    for (name, data) in &designs {
        for criterion in [Criterion::Pillai, Criterion::Wilks] {
            rows.push(evaluate(name, data, criterion, seed)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_design_stops_wilks_at_zero() {
        let d = binary_separable(100, 3, &mut replicate_rng(5, 1));
        let p = evaluate("binary-separable", &d, Criterion::Pillai, 5).unwrap();
        let w = evaluate("binary-separable", &d, Criterion::Wilks, 5).unwrap();
        assert_eq!(w.stop_reason, "WilksZeroStop");
        assert_eq!(w.n_selected, 1);
        assert_eq!(p.train_accuracy, 1.0);
        assert_eq!(w.train_accuracy, 1.0);
    }
}
