use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `(θ̂ − θ)ᵀ M (θ̂ − θ)` for a positive semidefinite second moment `M`.
pub fn model_error(theta_hat: &[f64], theta_true: &[f64], second_moment: &DMatrix<f64>) -> Result<f64> {
    let p = theta_hat.len();
    if theta_true.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: theta_true.len() });
    }
    if second_moment.shape() != (p, p) {
        return Err(Error::InvalidArgument(format!(
            "second moment is {}x{}, expected {p}x{p}",
            second_moment.nrows(),
            second_moment.ncols()
        )));
    }
    let d = DVector::from_iterator(p, theta_hat.iter().zip(theta_true).map(|(a, b)| a - b));
    // Clamp rounding noise from a semidefinite M.
    Ok((d.transpose() * second_moment * &d)[(0, 0)].max(0.0))
}

/// Empirical second moment `XᵀX / n` of design rows.
pub fn second_moment(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows().max(1) as f64;
    x.transpose() * x / n
}
