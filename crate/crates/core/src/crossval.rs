//! Seeded k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::selection::{forward_select, SelectionConfig};
use crate::ulda::fit_ulda;
use crate::{Dataset, Error, Result};

/// Fold index for each of `n` rows: a seeded shuffle dealt round-robin into `k` folds.
pub fn kfold_assignment(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::Domain(format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::Domain(format!("{k} folds for {n} rows")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        fold[row] = pos % k;
    }
    Ok(fold)
}

/// Train and test row indices of fold `f`.
pub fn fold_rows(assignment: &[usize], f: usize) -> (Vec<usize>, Vec<usize>) {
    (0..assignment.len()).partition(|&r| assignment[r] != f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub n_selected: usize,
    pub accuracy: f64,
}

/// Runs `evaluate(train_rows, test_rows)` on each fold.
pub fn cross_validate_with<F>(n: usize, k: usize, seed: u64, mut evaluate: F) -> Result<Vec<FoldResult>>
where
    F: FnMut(usize, &[usize], &[usize]) -> Result<FoldResult>,
{
    let assignment = kfold_assignment(n, k, seed)?;
    (0..k)
        .map(|f| {
            let (train, test) = fold_rows(&assignment, f);
            evaluate(f, &train, &test)
        })
        .collect()
}

/// Cross-validated ULDA accuracy, with optional forward selection refitted in each fold.
pub fn cross_validate(
    data: &Dataset,
    k: usize,
    seed: u64,
    selection: Option<&SelectionConfig>,
) -> Result<Vec<FoldResult>> {
    cross_validate_with(data.n_obs(), k, seed, |fold, train, test| {
        let train_set = data.select_rows(train)?;
        let cols = match selection {
            Some(cfg) => forward_select(&train_set, cfg)?.selected,
            None => (0..data.n_features()).collect(),
        };
        let model = fit_ulda(&train_set.select_columns(&cols)?, None)?;
        let test_x = data.x().select(ndarray::Axis(0), test).select(ndarray::Axis(1), &cols);
        let pred = model.predict(test_x.view(), None)?;
        let labels = data.labels();
        let hits = pred.iter().zip(test).filter(|(p, &r)| p.as_str() == labels[r]).count();
        Ok(FoldResult {
            fold,
            n_train: train.len(),
            n_test: test.len(),
            n_selected: cols.len(),
            accuracy: hits as f64 / test.len() as f64,
        })
    })
}

/// Mean of the per-fold accuracies.
pub fn mean_accuracy(folds: &[FoldResult]) -> f64 {
    folds.iter().map(|f| f.accuracy).sum::<f64>() / folds.len().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::Criterion;
    use ndarray::Array2;

    #[test]
    fn folds_are_balanced_and_seeded() {
        let a = kfold_assignment(23, 5, 42).unwrap();
        let b = kfold_assignment(23, 5, 42).unwrap();
        assert_eq!(a, b);
        let mut sizes = [0; 5];
        a.iter().for_each(|&f| sizes[f] += 1);
        assert!(sizes.iter().all(|&s| s == 4 || s == 5));
        assert_ne!(a, kfold_assignment(23, 5, 7).unwrap());
        assert!(kfold_assignment(3, 4, 1).is_err());
    }

    #[test]
    fn leave_one_out_runs() {
        let n = 20;
        let codes: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let x = Array2::from_shape_fn((n, 2), |(i, c)| codes[i] as f64 * 3.0 + ((i * 7 + c * 3) % 5) as f64 * 0.1);
        let d = Dataset::from_codes(x, codes, vec!["a".into(), "b".into()], vec!["p".into(), "q".into()]).unwrap();
        let folds = cross_validate(&d, n, 42, None).unwrap();
        assert_eq!(folds.len(), n);
        assert_eq!(mean_accuracy(&folds), 1.0);
    }

    #[test]
    fn one_hot_cross_validates_perfectly() {
        let n = 500;
        let j = 10;
        let codes: Vec<usize> = (0..n).map(|i| i % j).collect();
        let x = Array2::from_shape_fn((n, j), |(i, c)| if codes[i] == c { 1.0 } else { 0.0 });
        let d = Dataset::from_codes(x, codes, (0..j).map(|c| c.to_string()).collect(), (0..j).map(|c| format!("d{c}")).collect())
            .unwrap();
        let folds = cross_validate(&d, 10, 42, Some(&SelectionConfig::new(Criterion::Pillai))).unwrap();
        assert_eq!(mean_accuracy(&folds), 1.0);
        assert!(folds.iter().all(|f| f.n_selected == 9));
    }
}
