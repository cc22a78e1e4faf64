//! Family-wise type-I error of forward selection as pure-noise columns are added.

use fwdlda::selection::{forward_select, Criterion, SelectionConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{iris, with_noise, IRIS_FEATURES};
use crate::{replicate_rng, Error, Result};

pub const DEFAULT_M_LIST: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];
pub const DEFAULT_REPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// The four iris measurements plus `M` noise columns; an error is any
    /// noise column entering.
    IrisPlusNoise,
    /// Iris labels with `M` noise columns only; an error is any column entering.
    PureNoise,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::IrisPlusNoise => "iris-plus-noise",
            Scenario::PureNoise => "pure-noise",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Type1Row {
    pub scenario: &'static str,
    pub variant: String,
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
    pub errors: usize,
    pub rate: f64,
    /// 95% normal-approximation half-width around `rate`.
    pub ci_half_width: f64,
    /// `alpha + 2 * sqrt(alpha (1 - alpha) / reps)`.
    pub nominal_bound: f64,
}

/// Estimated family-wise error rate per `(variant, M)`.
///
/// Each replicate draws one noise matrix and runs every variant on it.
pub fn sim_type1(
    scenario: Scenario,
    m_list: &[usize],
    reps: usize,
    variants: &[Criterion],
    alpha: f64,
    seed: u64,
) -> Result<Vec<Type1Row>> {
    if reps == 0 || m_list.contains(&0) {
        return Err(Error::Invalid("reps and every M must be positive".into()));
    }
    let (iris_x, labels) = iris();
    let (prefix, prefix_names, n_prefix) = match scenario {
        Scenario::IrisPlusNoise => (iris_x, IRIS_FEATURES.iter().map(|s| s.to_string()).collect::<Vec<_>>(), 4),
        Scenario::PureNoise => (ndarray::Array2::zeros((labels.len(), 0)), Vec::new(), 0),
    };
    let configs: Vec<SelectionConfig> = variants.iter().map(|&c| SelectionConfig::new(c).with_alpha(alpha)).collect();

    let mut rows = Vec::new();
    for (mi, &m) in m_list.iter().enumerate() {
        let outcomes: Vec<Result<Vec<bool>>> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let stream = ((scenario as u64) << 48) | ((mi as u64) << 32) | rep as u64;
                let mut rng = replicate_rng(seed, stream);
                let d = with_noise(&prefix, &prefix_names, &labels, m, &mut rng);
                configs
                    .iter()
                    .map(|cfg| {
                        let r = forward_select(&d, cfg)?;
                        Ok(r.trajectory.iter().any(|s| s.column >= n_prefix))
                    })
                    .collect()
            })
            .collect();
        let mut errors = vec![0usize; variants.len()];
        for o in outcomes {
            for (e, hit) in errors.iter_mut().zip(o?) {
                *e += hit as usize;
            }
        }
        for (v, &count) in variants.iter().zip(&errors) {
            let rate = count as f64 / reps as f64;
            rows.push(Type1Row {
                scenario: scenario.name(),
                variant: v.to_string(),
                m,
                reps,
                seed,
                alpha,
                errors: count,
                rate,
                ci_half_width: 1.96 * (rate * (1.0 - rate) / reps as f64).sqrt(),
                nominal_bound: alpha + 2.0 * (alpha * (1.0 - alpha) / reps as f64).sqrt(),
            });
        }
        log::info!("{} M={m}: {:?}", scenario.name(), errors);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_is_deterministic() {
        let variants = [Criterion::Pillai, Criterion::Wilks];
        let a = sim_type1(Scenario::PureNoise, &[1, 8], 40, &variants, 0.05, 3).unwrap();
        let b = sim_type1(Scenario::PureNoise, &[1, 8], 40, &variants, 0.05, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|r| (0.0..=1.0).contains(&r.rate)));
    }
}
