use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::path::{lasso_path, LassoPath, PathScaling};
use crate::error::{invalid_arg, Result};
use crate::terms::ModelSupport;

/// Outcome of K-fold cross-validation over a path's breakpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub folds: usize,
    /// Candidate penalties: the full-data path's breakpoints.
    pub grid: Vec<f64>,
    /// Mean out-of-fold squared error per grid value.
    pub mean_error: Vec<f64>,
    pub lambda: f64,
    pub coefficients: Vec<f64>,
    pub support: ModelSupport,
}

/// Picks λ on the breakpoint grid of the full path by mean out-of-fold
/// squared error (ties go to the larger λ) and returns the full-data LASSO
/// coefficients there. Fold membership is a seeded shuffle.
pub fn cv_lasso(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    terms: &ModelSupport,
    folds: usize,
    seed: u64,
) -> Result<CvResult> {
    let n = x.nrows();
    if folds < 2 {
        return Err(invalid_arg(format!("need at least 2 folds, got {folds}")));
    }
    if n < folds {
        return Err(invalid_arg(format!("{n} rows cannot fill {folds} folds")));
    }
    let full = lasso_path(x, y, terms, PathScaling::PerObservation)?;
    cv_on_path(&full, x, y, folds, seed)
}

pub(crate) fn cv_on_path(
    full: &LassoPath,
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    folds: usize,
    seed: u64,
) -> Result<CvResult> {
    let n = x.nrows();
    let grid = full.lambdas();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let fold_of: Vec<usize> = {
        let mut f = vec![0; n];
        for (pos, &row) in order.iter().enumerate() {
            f[row] = pos % folds;
        }
        f
    };

    let mut sum_error = vec![0.0; grid.len()];
    for k in 0..folds {
        let train: Vec<usize> = (0..n).filter(|&i| fold_of[i] != k).collect();
        let held: Vec<usize> = (0..n).filter(|&i| fold_of[i] == k).collect();
        let (xt, yt) = (x.select_rows(&train), y.select_rows(&train));
        let (xh, yh) = (x.select_rows(&held), y.select_rows(&held));
        let path = lasso_path(&xt, &yt, &full.terms, PathScaling::PerObservation)?;
        for (g, &lambda) in grid.iter().enumerate() {
            let beta = DVector::from_vec(path.coefficients_at(lambda)?);
            let r = &yh - &xh * beta;
            sum_error[g] += r.norm_squared() / held.len() as f64;
        }
    }
    let mean_error: Vec<f64> = sum_error.iter().map(|s| s / folds as f64).collect();
    // Grid is increasing, so scanning forward with `<=` keeps the larger λ on ties.
    let mut best = 0;
    for g in 1..grid.len() {
        if mean_error[g] <= mean_error[best] {
            best = g;
        }
    }
    let lambda = grid[best];
    let coefficients = full.coefficients_at(lambda)?;
    let support = full.terms.select(|j| coefficients[j] != 0.0);
    Ok(CvResult { folds, grid, mean_error, lambda, coefficients, support })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::enumerate_candidate_terms;

    #[test]
    fn noiseless_single_variable_selects_small_lambda() {
        let x = DMatrix::from_fn(40, 1, |i, _| (i as f64 * 0.37).sin());
        let y = x.column(0) * 1.5;
        let terms = enumerate_candidate_terms(1, 1).unwrap();
        let cv = cv_lasso(&x, &y.into_owned(), &terms, 5, 11).unwrap();
        assert!(cv.lambda < 1e-9);
        assert!((cv.coefficients[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn deterministic_given_seed() {
        let x = DMatrix::from_fn(30, 4, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0);
        let y = DVector::from_fn(30, |i, _| ((i * 3) % 5) as f64 - 2.0);
        let terms = enumerate_candidate_terms(4, 1).unwrap();
        let a = cv_lasso(&x, &y, &terms, 5, 3).unwrap();
        let b = cv_lasso(&x, &y, &terms, 5, 3).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn pure_noise_support_is_bounded_by_the_path() {
        let x = DMatrix::from_fn(50, 6, |i, j| ((i * 31 + j * 17) % 23) as f64 / 23.0 - 0.5);
        let y = DVector::from_fn(50, |i, _| ((i * 97) % 13) as f64 / 13.0 - 0.5);
        let terms = enumerate_candidate_terms(6, 1).unwrap();
        let cv = cv_lasso(&x, &y, &terms, 5, 1).unwrap();
        let full = lasso_path(&x, &y, &terms, PathScaling::PerObservation).unwrap();
        let max_support = full.breakpoints.iter().map(|b| b.support.len()).max().unwrap();
        assert!(cv.support.len() <= max_support);
    }

    #[test]
    fn argument_checks() {
        let x = DMatrix::from_element(3, 1, 1.0);
        let terms = enumerate_candidate_terms(1, 1).unwrap();
        assert!(cv_lasso(&x, &DVector::zeros(3), &terms, 1, 0).is_err());
        assert!(cv_lasso(&x, &DVector::zeros(3), &terms, 4, 0).is_err());
    }
}
