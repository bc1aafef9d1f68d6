use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lars::lars_lasso;
use crate::error::{invalid_arg, Error, Result};
use crate::terms::ModelSupport;

/// How λ relates to the columns handed to the path solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathScaling {
    /// `(1/2n)‖y − Xθ‖² + λ‖θ‖₁` on the columns as given.
    PerObservation,
    /// Columns rescaled to unit Euclidean norm and `½‖y − X̃β‖² + λ‖β‖₁`;
    /// coefficients are reported on the original column scale. This is the
    /// convention of R's `lars` package.
    UnitNorm,
}

/// Relative size below which a coefficient counts as zero.
pub const SUPPORT_TOLERANCE: f64 = 1e-9;

/// Breakpoints closer than this collapse into one.
pub const BREAKPOINT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub lambda: f64,
    pub coefficients: Vec<f64>,
    pub support: ModelSupport,
}

/// Piecewise-linear LASSO solution path, breakpoints in increasing λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoPath {
    pub scaling: PathScaling,
    pub n: usize,
    pub terms: ModelSupport,
    pub breakpoints: Vec<Breakpoint>,
}

impl LassoPath {
    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.breakpoints.iter().map(|b| b.lambda).collect()
    }

    /// The penalty at which the last coefficient vanishes.
    pub fn lambda_max(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.lambda)
    }

    /// Coefficients at any `λ ≥ 0` by linear interpolation between the
    /// bracketing breakpoints; zero beyond the last one.
    pub fn coefficients_at(&self, lambda: f64) -> Result<Vec<f64>> {
        if !(lambda >= 0.0) {
            return Err(invalid_arg(format!("λ must be non-negative, got {lambda}")));
        }
        let bps = &self.breakpoints;
        let last = bps.last().expect("paths have at least one breakpoint");
        if lambda >= last.lambda {
            return Ok(vec![0.0; self.terms.len()]);
        }
        let hi = bps.partition_point(|b| b.lambda < lambda);
        if bps[hi].lambda == lambda || hi == 0 {
            return Ok(bps[hi].coefficients.clone());
        }
        let (a, b) = (&bps[hi - 1], &bps[hi]);
        let f = (lambda - a.lambda) / (b.lambda - a.lambda);
        Ok(a.coefficients.iter().zip(&b.coefficients).map(|(u, v)| u + f * (v - u)).collect())
    }
}

/// Computes every breakpoint of the LASSO path for the columns `x` (aligned
/// to `terms`) and response `y`, including variable drops.
pub fn lasso_path(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    terms: &ModelSupport,
    scaling: PathScaling,
) -> Result<LassoPath> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if terms.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: terms.len() });
    }
    if n < 2 {
        return Err(Error::InvalidInput("a path needs at least two observations".into()));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("design or response contains non-finite values".into()));
    }

    let (work, col_scale) = match scaling {
        PathScaling::PerObservation => (x.clone(), vec![1.0; p]),
        PathScaling::UnitNorm => {
            let norms: Vec<f64> = (0..p).map(|j| x.column(j).norm()).collect();
            let mut w = x.clone();
            for (j, &s) in norms.iter().enumerate() {
                if s > 0.0 {
                    w.column_mut(j).scale_mut(1.0 / s);
                }
            }
            (w, norms)
        }
    };
    let lambda_of = |t: f64| match scaling {
        PathScaling::PerObservation => t / n as f64,
        PathScaling::UnitNorm => t,
    };

    let raw = lars_lasso(&work, y);
    let mut breakpoints: Vec<Breakpoint> = Vec::with_capacity(raw.len());
    for bp in raw.iter().rev() {
        let mut coefficients: Vec<f64> = bp
            .beta
            .iter()
            .zip(&col_scale)
            .map(|(b, s)| if *s > 0.0 { b / s } else { 0.0 })
            .collect();
        let big = coefficients.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for c in coefficients.iter_mut() {
            if c.abs() <= SUPPORT_TOLERANCE * big {
                *c = 0.0;
            }
        }
        let support = terms.select(|j| coefficients[j] != 0.0);
        let lambda = lambda_of(bp.t).max(0.0);
        match breakpoints.last_mut() {
            Some(prev) if (lambda - prev.lambda).abs() < BREAKPOINT_TOLERANCE => {
                // Coincident events: keep the state at the larger-λ side.
                *prev = Breakpoint { lambda: prev.lambda, coefficients, support };
            }
            _ => breakpoints.push(Breakpoint { lambda, coefficients, support }),
        }
    }
    Ok(LassoPath { scaling, n, terms: terms.clone(), breakpoints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::enumerate_candidate_terms;

    fn orthogonal_design() -> (DMatrix<f64>, DVector<f64>) {
        // Columns are orthogonal with xᵀx = n.
        let x = DMatrix::from_row_slice(4, 2, &[1., 1., 1., -1., -1., 1., -1., -1.]);
        let y = DVector::from_vec(vec![3.0, 1.0, -1.0, -2.0]);
        (x, y)
    }

    #[test]
    fn orthonormal_design_breakpoints_are_correlations() {
        let (x, y) = orthogonal_design();
        let terms = enumerate_candidate_terms(2, 1).unwrap();
        let path = lasso_path(&x, &y, &terms, PathScaling::PerObservation).unwrap();
        let c: Vec<f64> = (0..2).map(|j| x.column(j).dot(&y) / 4.0).collect();
        let lambdas = path.lambdas();
        assert_eq!(lambdas.len(), 3);
        assert!((lambdas[2] - c[0].abs().max(c[1].abs())).abs() < 1e-12);
        assert!((lambdas[1] - c[0].abs().min(c[1].abs())).abs() < 1e-12);
        for lambda in [0.0, 0.3, 0.6, 0.9, 2.0] {
            let b = path.coefficients_at(lambda).unwrap();
            for j in 0..2 {
                let soft = c[j].signum() * (c[j].abs() - lambda).max(0.0);
                assert!((b[j] - soft).abs() < 1e-12, "λ={lambda} j={j}");
            }
        }
    }

    #[test]
    fn zero_response_gives_single_zero_breakpoint() {
        let (x, _) = orthogonal_design();
        let terms = enumerate_candidate_terms(2, 1).unwrap();
        let path = lasso_path(&x, &DVector::zeros(4), &terms, PathScaling::PerObservation).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path.breakpoints[0].lambda, 0.0);
        assert!(path.breakpoints[0].support.is_empty());
    }

    #[test]
    fn interpolation_and_bounds() {
        let (x, y) = orthogonal_design();
        let terms = enumerate_candidate_terms(2, 1).unwrap();
        let path = lasso_path(&x, &y, &terms, PathScaling::PerObservation).unwrap();
        let bp = &path.breakpoints[1];
        assert_eq!(path.coefficients_at(bp.lambda).unwrap(), bp.coefficients);
        assert_eq!(path.coefficients_at(10.0).unwrap(), vec![0.0, 0.0]);
        assert!(path.coefficients_at(-0.1).is_err());
    }

    #[test]
    fn rejects_non_finite_input() {
        let (mut x, y) = orthogonal_design();
        x[(0, 0)] = f64::INFINITY;
        let terms = enumerate_candidate_terms(2, 1).unwrap();
        assert!(matches!(
            lasso_path(&x, &y, &terms, PathScaling::PerObservation),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn unit_norm_scaling_rescales_lambda() {
        let (x, y) = orthogonal_design();
        let terms = enumerate_candidate_terms(2, 1).unwrap();
        let a = lasso_path(&x, &y, &terms, PathScaling::PerObservation).unwrap();
        let b = lasso_path(&x, &y, &terms, PathScaling::UnitNorm).unwrap();
        // column norms are 2 = sqrt(n): λ_unit = n λ / sqrt(n).
        for (u, v) in a.lambdas().iter().zip(b.lambdas()) {
            assert!((u * 2.0 - v).abs() < 1e-12);
        }
        let last = |p: &LassoPath| p.breakpoints[0].coefficients.clone();
        assert_eq!(last(&a).len(), 2);
        for (u, v) in last(&a).iter().zip(last(&b)) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
