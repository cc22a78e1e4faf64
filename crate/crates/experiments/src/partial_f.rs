//! Null distribution of stepwise partial F statistics and of single-variable
//! Pillai's trace.

use fwdlda::scatter::scatter_for;
use fwdlda::stats::{beta_cdf, f_cdf, partial_f, partial_wilks, pillai_trace, wilks_lambda};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::null_design;
use crate::ks::{ks_test, KsResult};
use crate::{replicate_rng, Result};

pub const N_OBS: usize = 150;
pub const N_CLASSES: usize = 3;

const TWO_VARIABLE_STREAM: u64 = 1 << 40;
const PILLAI_STREAM: u64 = 2 << 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFDraw {
    pub scenario: &'static str,
    pub seed: u64,
    pub round: usize,
    pub step: usize,
    pub df1: usize,
    pub df2: usize,
    pub partial_f: f64,
}

fn lambda(data: &fwdlda::Dataset, cols: &[usize]) -> Result<f64> {
    Ok(wilks_lambda(&scatter_for(data, cols)?)?)
}

/// One- and two-variable null rounds (`N = 150`, `J = 3`, standard-normal features).
///
/// In the two-variable rounds step 1 records the larger of the two marginal
/// partial F values and step 2 the partial F of the other variable given the first.
pub fn sim_partial_f(reps: usize, seed: u64) -> Result<Vec<PartialFDraw>> {
    let df1 = N_CLASSES - 1;
    let rounds: Vec<Result<Vec<PartialFDraw>>> = (0..reps)
        .into_par_iter()
        .map(|round| {
            let mut out = Vec::with_capacity(3);
            let mut rng = replicate_rng(seed, round as u64);
            let d = null_design(N_OBS, N_CLASSES, 1, &mut rng);
            let f = partial_f(lambda(&d, &[0])?, N_OBS, N_CLASSES, 0)?;
            out.push(PartialFDraw {
                scenario: "one-variable",
                seed,
                round,
                step: 1,
                df1,
                df2: N_OBS - N_CLASSES,
                partial_f: f.f_stat,
            });

            let mut rng = replicate_rng(seed, TWO_VARIABLE_STREAM + round as u64);
            let d = null_design(N_OBS, N_CLASSES, 2, &mut rng);
            let lam = [lambda(&d, &[0])?, lambda(&d, &[1])?];
            let first = if lam[1] < lam[0] { 1 } else { 0 };
            let f1 = partial_f(lam[first], N_OBS, N_CLASSES, 0)?;
            let both = lambda(&d, &[0, 1])?;
            let f2 = partial_f(partial_wilks(both, lam[first])?, N_OBS, N_CLASSES, 1)?;
            for (step, f) in [(1, f1), (2, f2)] {
                out.push(PartialFDraw {
                    scenario: "two-variable",
                    seed,
                    round,
                    step,
                    df1,
                    df2: N_OBS - N_CLASSES - (step - 1),
                    partial_f: f.f_stat,
                });
            }
            Ok(out)
        })
        .collect();
    let mut draws = Vec::with_capacity(3 * reps);
    for r in rounds {
        draws.extend(r?);
    }
    Ok(draws)
}

/// KS comparison of one (scenario, step) sample with its reference F distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFSummary {
    pub scenario: &'static str,
    pub step: usize,
    pub df1: usize,
    pub df2: usize,
    pub reps: usize,
    pub mean: f64,
    pub reference_mean: f64,
    pub ks_d: f64,
    pub ks_p: f64,
    pub ks_p_above: f64,
    pub ks_p_below: f64,
}

pub fn summarize_partial_f(draws: &[PartialFDraw]) -> Vec<PartialFSummary> {
    let mut keys: Vec<(&'static str, usize, usize, usize)> = Vec::new();
    for d in draws {
        let key = (d.scenario, d.step, d.df1, d.df2);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(scenario, step, df1, df2)| {
            let sample: Vec<f64> = draws
                .iter()
                .filter(|d| d.scenario == scenario && d.step == step)
                .map(|d| d.partial_f)
                .collect();
            let (a, b) = (df1 as f64, df2 as f64);
            let ks = ks_test(&sample, |x| f_cdf(x, a, b).unwrap_or(f64::NAN));
            PartialFSummary {
                scenario,
                step,
                df1,
                df2,
                reps: sample.len(),
                mean: sample.iter().sum::<f64>() / sample.len() as f64,
                reference_mean: b / (b - 2.0),
                ks_d: ks.d,
                ks_p: ks.p_value,
                ks_p_above: ks.p_above,
                ks_p_below: ks.p_below,
            }
        })
        .collect()
}

/// Pillai's trace of a single standard-normal feature under random balanced
/// labels (`N = 150`, `J = 3`), one value per replicate.
pub fn sim_null_pillai(reps: usize, seed: u64) -> Result<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, PILLAI_STREAM + rep as u64);
            let d = null_design(N_OBS, N_CLASSES, 1, &mut rng);
            Ok(pillai_trace(&scatter_for(&d, &[0])?)?)
        })
        .collect()
}

/// KS test of null Pillai values against `Beta((J - 1) / 2, (N - J) / 2)`.
pub fn null_pillai_ks(values: &[f64]) -> KsResult {
    let a = (N_CLASSES - 1) as f64 / 2.0;
    let b = (N_OBS - N_CLASSES) as f64 / 2.0;
    ks_test(values, |x| beta_cdf(x.clamp(0.0, 1.0), a, b).unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_deterministic() {
        let a = sim_partial_f(50, 7).unwrap();
        let b = sim_partial_f(50, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 150);
        let s = summarize_partial_f(&a);
        assert_eq!(s.len(), 3);
        assert_eq!(s[2].df2, 146);
    }
}
