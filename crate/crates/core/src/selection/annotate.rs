use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::model_error::{model_error, second_moment};
use crate::error::{invalid_arg, Error, Result};
use crate::homology::{betti_numbers, BettiVector};
use crate::regression::{ols_refit, LassoPath};
use crate::terms::ModelSupport;

/// Which error the criteria normalise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMode {
    /// Residual sum of squares on the validation split.
    Validation,
    /// Model error against known true coefficients (simulations only).
    Oracle,
}

/// Errors of one coefficient vector.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Errors {
    pub validation_rss: f64,
    /// `(θ̂ − θ)ᵀ M_v (θ̂ − θ)` with the validation second moment.
    pub model_error: Option<f64>,
    pub held_out_rss: Option<f64>,
    /// Model error with the held-out second moment.
    pub held_out_model_error: Option<f64>,
}

impl Errors {
    pub fn term(&self, mode: ErrorMode) -> Option<f64> {
        match mode {
            ErrorMode::Validation => Some(self.validation_rss),
            ErrorMode::Oracle => self.model_error,
        }
    }

    pub fn held_out(&self, mode: ErrorMode) -> Option<f64> {
        match mode {
            ErrorMode::Validation => self.held_out_rss,
            ErrorMode::Oracle => self.held_out_model_error,
        }
    }
}

/// One breakpoint with its topology and refit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub lambda: f64,
    pub support: ModelSupport,
    pub closure: ModelSupport,
    pub betti: BettiVector,
    pub lasso_coefficients: Vec<f64>,
    pub lasso_errors: Errors,
    /// LARS-OLS refit on the raw support; `None` marks the breakpoint unusable.
    pub refit: Option<Vec<f64>>,
    pub refit_errors: Option<Errors>,
    pub rank_deficient: bool,
    pub note: Option<String>,
}

impl PathEntry {
    pub fn is_usable(&self) -> bool {
        self.refit.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedPath {
    pub candidate: ModelSupport,
    pub betti_len: usize,
    pub entries: Vec<PathEntry>,
}

impl AnnotatedPath {
    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn betti(&self) -> Vec<BettiVector> {
        self.entries.iter().map(|e| e.betti.clone()).collect()
    }

    /// Error term of the refits, `None` where unusable or unavailable.
    pub fn refit_error(&self, mode: ErrorMode) -> Vec<Option<f64>> {
        self.entries.iter().map(|e| e.refit_errors.as_ref().and_then(|r| r.term(mode))).collect()
    }

    pub fn refit_held_out(&self, mode: ErrorMode) -> Vec<Option<f64>> {
        self.entries.iter().map(|e| e.refit_errors.as_ref().and_then(|r| r.held_out(mode))).collect()
    }
}

/// Data the annotation needs beyond the path itself. All matrices are
/// design columns aligned to the path's candidate terms.
#[derive(Clone, Copy, Debug)]
pub struct AnnotationContext<'a> {
    pub train: (&'a DMatrix<f64>, &'a DVector<f64>),
    pub validation: (&'a DMatrix<f64>, &'a DVector<f64>),
    /// Split used to choose the criterion weight, if any.
    pub held_out: Option<(&'a DMatrix<f64>, &'a DVector<f64>)>,
    /// Length of every Betti vector, normally the candidate's max order.
    pub betti_len: usize,
    /// True coefficients in candidate order (simulations).
    pub truth: Option<&'a [f64]>,
}

struct Scorer<'a> {
    ctx: AnnotationContext<'a>,
    m_validation: Option<DMatrix<f64>>,
    m_held_out: Option<DMatrix<f64>>,
}

impl Scorer<'_> {
    fn score(&self, beta: &[f64]) -> Result<Errors> {
        let b = DVector::from_column_slice(beta);
        let rss = |(x, y): (&DMatrix<f64>, &DVector<f64>)| (y - x * &b).norm_squared();
        let me = |m: &Option<DMatrix<f64>>| -> Result<Option<f64>> {
            match (m, self.ctx.truth) {
                (Some(m), Some(t)) => model_error(beta, t, m).map(Some),
                _ => Ok(None),
            }
        };
        Ok(Errors {
            validation_rss: rss(self.ctx.validation),
            model_error: me(&self.m_validation)?,
            held_out_rss: self.ctx.held_out.map(rss),
            held_out_model_error: me(&self.m_held_out)?,
        })
    }
}

/// For every breakpoint: hierarchical closure, its Betti vector, the OLS
/// refit on the raw support and the refit's errors. The closure only feeds
/// the topology.
pub fn annotate_path(path: &LassoPath, ctx: AnnotationContext<'_>) -> Result<AnnotatedPath> {
    if path.is_empty() {
        return Err(invalid_arg("cannot annotate an empty path"));
    }
    if ctx.betti_len == 0 {
        return Err(invalid_arg("Betti vectors need at least one entry"));
    }
    let p = path.terms.len();
    for (name, (x, y)) in [("train", ctx.train), ("validation", ctx.validation)]
        .into_iter()
        .chain(ctx.held_out.map(|h| ("held-out", h)))
    {
        if x.ncols() != p || x.nrows() != y.len() {
            return Err(Error::InvalidArgument(format!(
                "{name} design is {}x{} with {} responses; expected {p} columns",
                x.nrows(),
                x.ncols(),
                y.len()
            )));
        }
    }
    if let Some(t) = ctx.truth {
        if t.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: t.len() });
        }
    }
    let scorer = Scorer {
        ctx,
        m_validation: ctx.truth.map(|_| second_moment(ctx.validation.0)),
        m_held_out: ctx.truth.and(ctx.held_out).map(|(x, _)| second_moment(x)),
    };

    let n_train = ctx.train.0.nrows();
    let mut betti_cache: HashMap<ModelSupport, BettiVector> = HashMap::new();
    let mut entries = Vec::with_capacity(path.len());
    for bp in &path.breakpoints {
        let closure = bp.support.hierarchical_closure();
        let betti = match betti_cache.get(&closure) {
            Some(b) => b.clone(),
            None => {
                let complex = closure.to_simplicial_complex()?;
                let (b, _) = betti_numbers(&complex, ctx.betti_len - 1);
                betti_cache.insert(closure.clone(), b.clone());
                b
            }
        };
        let lasso_errors = scorer.score(&bp.coefficients)?;
        let columns: Vec<usize> = (0..p).filter(|&j| bp.coefficients[j] != 0.0).collect();
        let (refit, refit_errors, rank_deficient, note) = if columns.len() > n_train {
            let msg = format!("support of {} exceeds {n_train} training rows", columns.len());
            (None, None, false, Some(msg))
        } else {
            match ols_refit(ctx.train.0, ctx.train.1, &columns) {
                Ok(fit) => {
                    let errs = scorer.score(&fit.coefficients)?;
                    let note = fit.rank_deficient.then(|| "minimum-norm refit".to_string());
                    (Some(fit.coefficients), Some(errs), fit.rank_deficient, note)
                }
                Err(e) => (None, None, false, Some(e.to_string())),
            }
        };
        entries.push(PathEntry {
            lambda: bp.lambda,
            support: bp.support.clone(),
            closure,
            betti,
            lasso_coefficients: bp.coefficients.clone(),
            lasso_errors,
            refit,
            refit_errors,
            rank_deficient,
            note,
        });
    }
    Ok(AnnotatedPath { candidate: path.terms.clone(), betti_len: ctx.betti_len, entries })
}
