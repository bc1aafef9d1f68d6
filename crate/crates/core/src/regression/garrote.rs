//! Non-negative garrote.
//!
//! Shrinks the full OLS estimate column by column: with `Z_j = x_j θ̂ᵒˡˢ_j`
//! the factors solve `min_{D ≥ 0} (1/2n)‖y − ZD‖² + λ‖D‖₁`, a non-negative
//! LASSO, handled here by cyclic coordinate descent with clipping at zero.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ols::least_squares;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100_000;
const TOLERANCE: f64 = 1e-12;

/// Number of log-spaced λ values in the default grid (λ = 0 is appended).
pub const DEFAULT_GRID_SIZE: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GarrotePath {
    pub ols: Vec<f64>,
    /// Penalties in decreasing order.
    pub lambdas: Vec<f64>,
    pub shrink: Vec<Vec<f64>>,
    pub coefficients: Vec<Vec<f64>>,
}

impl GarrotePath {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Smallest λ at which every shrink factor is zero.
fn lambda_max(zty: &DVector<f64>) -> f64 {
    zty.iter().copied().fold(0.0, f64::max)
}

/// Garrote path over `grid`, or over the default grid when `None`.
pub fn nonnegative_garrote(x: &DMatrix<f64>, y: &DVector<f64>, grid: Option<&[f64]>) -> Result<GarrotePath> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if n <= p {
        return Err(Error::NotApplicable(format!(
            "the garrote needs an OLS fit with more rows ({n}) than terms ({p})"
        )));
    }
    let (ols, deficient) = least_squares(x, y);
    if deficient {
        return Err(Error::NotApplicable("the full design is rank deficient".into()));
    }
    let mut z = x.clone();
    for j in 0..p {
        z.column_mut(j).scale_mut(ols[j]);
    }
    let nf = n as f64;
    let g = z.transpose() * &z / nf;
    let b = z.transpose() * y / nf;

    let lambdas: Vec<f64> = match grid {
        Some(g) => {
            if g.iter().any(|l| !(*l >= 0.0)) {
                return Err(Error::InvalidArgument("garrote penalties must be non-negative".into()));
            }
            let mut v = g.to_vec();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        }
        None => default_grid(lambda_max(&b)),
    };

    let mut d = DVector::<f64>::zeros(p);
    let mut shrink = Vec::with_capacity(lambdas.len());
    let mut coefficients = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        if lambda == 0.0 {
            // The unconstrained minimiser D = 1 is feasible.
            d.fill(1.0);
        } else {
            nonnegative_cd(&g, &b, lambda, &mut d);
        }
        shrink.push(d.iter().copied().collect::<Vec<_>>());
        coefficients.push(d.iter().zip(ols.iter()).map(|(s, o)| s * o).collect());
    }
    Ok(GarrotePath { ols: ols.iter().copied().collect(), lambdas, shrink, coefficients })
}

fn default_grid(lmax: f64) -> Vec<f64> {
    if lmax <= 0.0 {
        return vec![0.0];
    }
    let steps = DEFAULT_GRID_SIZE - 1;
    let mut v: Vec<f64> = (0..=steps).map(|i| lmax * 10f64.powf(-4.0 * i as f64 / steps as f64)).collect();
    v.push(0.0);
    v
}

/// Coordinate descent for `min_{d ≥ 0} ½dᵀGd − bᵀd + λΣd`, warm-started
/// from `d`.
pub(crate) fn nonnegative_cd(g: &DMatrix<f64>, b: &DVector<f64>, lambda: f64, d: &mut DVector<f64>) {
    let p = b.len();
    // grad = G d
    let mut gd = g * &*d;
    for _ in 0..MAX_SWEEPS {
        let mut max_change = 0.0f64;
        for j in 0..p {
            let gjj = g[(j, j)];
            if gjj <= 0.0 {
                d[j] = 0.0;
                continue;
            }
            let partial = b[j] - (gd[j] - gjj * d[j]);
            let new = ((partial - lambda) / gjj).max(0.0);
            let delta = new - d[j];
            if delta != 0.0 {
                gd.axpy(delta, &g.column(j).into_owned(), 1.0);
                d[j] = new;
                max_change = max_change.max(delta.abs() * gjj.sqrt());
            }
        }
        if max_change < TOLERANCE {
            break;
        }
    }
}
