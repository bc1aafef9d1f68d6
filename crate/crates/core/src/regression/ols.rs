use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares refit on a subset of columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    /// Full-length coefficient vector, zero outside the fitted columns.
    pub coefficients: Vec<f64>,
    /// The restricted design was numerically rank deficient and the
    /// minimum-norm solution was returned.
    pub rank_deficient: bool,
}

/// Ordinary least squares restricted to `columns` of `x`.
pub fn ols_refit(x: &DMatrix<f64>, y: &DVector<f64>, columns: &[usize]) -> Result<OlsFit> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if let Some(&j) = columns.iter().find(|&&j| j >= p) {
        return Err(Error::InvalidArgument(format!("column {j} out of range for {p} columns")));
    }
    if columns.len() > n {
        return Err(Error::InvalidArgument(format!(
            "support of {} terms exceeds the {n} training rows",
            columns.len()
        )));
    }
    let mut coefficients = vec![0.0; p];
    if columns.is_empty() {
        return Ok(OlsFit { coefficients, rank_deficient: false });
    }
    let xs = x.select_columns(columns);
    let (beta, rank_deficient) = least_squares(&xs, y);
    for (k, &j) in columns.iter().enumerate() {
        coefficients[j] = beta[k];
    }
    Ok(OlsFit { coefficients, rank_deficient })
}

/// Cholesky on the normal equations when well conditioned, otherwise the
/// SVD pseudo-inverse. Returns the solution and whether the fallback ran.
pub(crate) fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> (DVector<f64>, bool) {
    let gram = x.transpose() * x;
    let rhs = x.transpose() * y;
    if let Some(ch) = gram.clone().cholesky() {
        let l = ch.l_dirty();
        let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)] * l[(i, i)]).collect();
        let hi = diag.iter().copied().fold(0.0, f64::max);
        let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
        if lo > 1e-10 * hi {
            return (ch.solve(&rhs), false);
        }
    }
    let svd = x.clone().svd(true, true);
    let tol = svd.singular_values.max() * 1e-10 * (x.nrows().max(x.ncols()) as f64);
    let beta = svd.solve(y, tol).expect("both singular vector sets were computed");
    (beta, true)
}
