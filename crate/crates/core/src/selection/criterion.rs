use serde::{Deserialize, Serialize};

use super::annotate::{AnnotatedPath, ErrorMode};
use crate::error::{invalid_arg, Error, Result};
use crate::homology::BettiVector;
use crate::terms::{ModelSupport, Term};

/// Named Betti weightings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BettiPreset {
    /// `Σ_{i≥0} β_i`
    AllCycles,
    /// `Σ_{i≥1} β_i`
    NoZeroCycles,
    /// `Σ_{i≥2} β_i`
    HigherCycles,
    /// `β_0 + β_1`
    LowerCycles,
}

impl BettiPreset {
    pub const ALL: [BettiPreset; 4] =
        [Self::AllCycles, Self::NoZeroCycles, Self::HigherCycles, Self::LowerCycles];

    pub fn weights(self, len: usize) -> Vec<f64> {
        (0..len)
            .map(|i| match self {
                Self::AllCycles => 1.0,
                Self::NoZeroCycles => f64::from(i >= 1),
                Self::HigherCycles => f64::from(i >= 2),
                Self::LowerCycles => f64::from(i <= 1),
            })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::AllCycles => "all",
            Self::NoZeroCycles => "no0",
            Self::HigherCycles => "higher",
            Self::LowerCycles => "lower",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::AllCycles => "All cycles",
            Self::NoZeroCycles => "No 0-cycles",
            Self::HigherCycles => "Higher cycles",
            Self::LowerCycles => "Lower cycles",
        }
    }
}

/// How the weight μ is settled once each μ has a minimising λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuSelection {
    /// Minimise the criterion jointly over (λ, μ).
    Joint,
    /// Per μ take the minimising λ, then keep the μ whose model has the
    /// smallest held-out error.
    HeldOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionConfig {
    pub mu_grid: Vec<f64>,
    pub betti_weights: Vec<f64>,
    pub mode: ErrorMode,
    pub mu_selection: MuSelection,
}

impl CriterionConfig {
    pub fn new(mu_grid: Vec<f64>, betti_weights: Vec<f64>, mode: ErrorMode, mu_selection: MuSelection) -> Result<Self> {
        if mu_grid.is_empty() {
            return Err(invalid_arg("the μ grid is empty"));
        }
        if mu_grid.iter().any(|m| !(0.0..=1.0).contains(m)) {
            return Err(invalid_arg("μ values must lie in [0, 1]"));
        }
        if mu_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid_arg("μ grid must be strictly increasing"));
        }
        if betti_weights.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
            return Err(invalid_arg("Betti weights must be non-negative and finite"));
        }
        if !betti_weights.iter().any(|a| *a > 0.0) {
            return Err(invalid_arg("at least one Betti weight must be positive"));
        }
        Ok(Self { mu_grid, betti_weights, mode, mu_selection })
    }

    pub fn preset(preset: BettiPreset, betti_len: usize, mode: ErrorMode) -> Result<Self> {
        Self::new(default_mu_grid(), preset.weights(betti_len), mode, MuSelection::HeldOut)
    }

    pub fn with_mu_grid(mut self, mu_grid: Vec<f64>) -> Result<Self> {
        let Self { betti_weights, mode, mu_selection, .. } = self;
        self = Self::new(mu_grid, betti_weights, mode, mu_selection)?;
        Ok(self)
    }

    pub fn with_mu_selection(mut self, mu_selection: MuSelection) -> Self {
        self.mu_selection = mu_selection;
        self
    }
}

/// 101 equispaced weights on `[0, 1]`.
pub fn default_mu_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Criterion values on the (λ, μ) grid, rows ordered by λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionSurface {
    pub lambdas: Vec<f64>,
    pub mu_grid: Vec<f64>,
    /// `values[λ][μ]`; `None` on unusable breakpoints.
    pub values: Vec<Vec<Option<f64>>>,
    /// Normalised error term per breakpoint.
    pub error_term: Vec<Option<f64>>,
    /// Normalised complexity term per breakpoint.
    pub complexity_term: Vec<f64>,
    /// The error maximum was zero; the error term is set to 0.
    pub degenerate_error: bool,
    /// The complexity maximum was zero; the complexity term is set to 0.
    pub degenerate_complexity: bool,
}

fn surface(a: &AnnotatedPath, mode: ErrorMode, mu_grid: &[f64], complexity: &[f64]) -> Result<CriterionSurface> {
    let errors = a.refit_error(mode);
    let usable: Vec<usize> = (0..errors.len()).filter(|&i| errors[i].is_some()).collect();
    if usable.is_empty() {
        let why = if mode == ErrorMode::Oracle { " (oracle mode needs true coefficients)" } else { "" };
        return Err(Error::SelectionFailed(format!("no usable breakpoints{why}")));
    }
    let emax = usable.iter().filter_map(|&i| errors[i]).fold(0.0, f64::max);
    let cmax = usable.iter().map(|&i| complexity[i]).fold(0.0, f64::max);
    let degenerate_error = !(emax > 0.0);
    let degenerate_complexity = !(cmax > 0.0);
    let error_term: Vec<Option<f64>> =
        errors.iter().map(|e| e.map(|e| if degenerate_error { 0.0 } else { e / emax })).collect();
    let complexity_term: Vec<f64> =
        complexity.iter().map(|c| if degenerate_complexity { 0.0 } else { c / cmax }).collect();
    let values = error_term
        .iter()
        .zip(&complexity_term)
        .map(|(e, c)| mu_grid.iter().map(|mu| e.map(|e| (1.0 - mu) * e + mu * c)).collect())
        .collect();
    Ok(CriterionSurface {
        lambdas: a.lambdas(),
        mu_grid: mu_grid.to_vec(),
        values,
        error_term,
        complexity_term,
        degenerate_error,
        degenerate_complexity,
    })
}

/// `CC(λ, μ) = (1 − μ)·err(λ)/max err + μ·b(λ)A / max b(λ)A`.
pub fn compound_criterion(a: &AnnotatedPath, cfg: &CriterionConfig) -> Result<CriterionSurface> {
    let scores: Vec<f64> = a.entries.iter().map(|e| e.betti.weighted(&cfg.betti_weights)).collect();
    surface(a, cfg.mode, &cfg.mu_grid, &scores)
}

/// The compound criterion with support size in place of the Betti score.
pub fn maic(a: &AnnotatedPath, cfg: &CriterionConfig) -> Result<CriterionSurface> {
    let sizes: Vec<f64> = a.entries.iter().map(|e| e.support.len() as f64).collect();
    surface(a, cfg.mode, &cfg.mu_grid, &sizes)
}

/// Result of one selection rule on an annotated path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub method: String,
    pub lambda_star: f64,
    pub mu_star: f64,
    pub breakpoint: usize,
    pub support: Vec<Term>,
    /// Coefficients over the candidate terms.
    pub coefficients: Vec<f64>,
    pub candidate_terms: Vec<Term>,
    pub lambdas: Vec<f64>,
    pub mu_grid: Vec<f64>,
    pub betti_per_breakpoint: Vec<BettiVector>,
    /// Row-major λ × μ.
    pub criterion_surface: Vec<Vec<Option<f64>>>,
    pub betti_weights: Option<Vec<f64>>,
    pub mu_selection: MuSelection,
    pub degenerate_error: bool,
    pub degenerate_complexity: bool,
}

impl SelectionReport {
    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn outcome(&self) -> MethodOutcome {
        MethodOutcome {
            method: self.method.clone(),
            lambda: Some(self.lambda_star),
            mu: Some(self.mu_star),
            coefficients: self.coefficients.clone(),
        }
    }
}

/// Coefficients chosen by any method, with enough context to score them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: String,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub coefficients: Vec<f64>,
}

impl MethodOutcome {
    pub fn support_size(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0.0).count()
    }
}

/// Argmin over usable λ for one μ column; ties go to the larger λ.
fn argmin_lambda(values: &[Vec<Option<f64>>], col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in (0..values.len()).rev() {
        if let Some(v) = values[i][col] {
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

fn choose(a: &AnnotatedPath, s: &CriterionSurface, cfg: &CriterionConfig) -> Result<(usize, usize)> {
    match cfg.mu_selection {
        MuSelection::Joint => {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in (0..s.values.len()).rev() {
                for (m, v) in s.values[i].iter().enumerate() {
                    if let Some(v) = *v {
                        if best.map_or(true, |(_, _, b)| v < b) {
                            best = Some((i, m, v));
                        }
                    }
                }
            }
            best.map(|(i, m, _)| (i, m)).ok_or_else(|| Error::SelectionFailed("empty criterion surface".into()))
        }
        MuSelection::HeldOut => {
            let held = a.refit_held_out(cfg.mode);
            let mut best: Option<(usize, usize, f64)> = None;
            for m in 0..s.mu_grid.len() {
                let i = argmin_lambda(&s.values, m)
                    .ok_or_else(|| Error::SelectionFailed("empty criterion surface".into()))?;
                let h = held[i].ok_or_else(|| {
                    Error::SelectionFailed("held-out μ selection needs a held-out split".into())
                })?;
                if best.map_or(true, |(_, _, b)| h < b) {
                    best = Some((i, m, h));
                }
            }
            best.map(|(i, m, _)| (i, m)).ok_or_else(|| Error::SelectionFailed("empty μ grid".into()))
        }
    }
}

fn report(
    a: &AnnotatedPath,
    s: CriterionSurface,
    cfg: &CriterionConfig,
    method: String,
    weights: Option<Vec<f64>>,
) -> Result<SelectionReport> {
    let (i, m) = choose(a, &s, cfg)?;
    let entry = &a.entries[i];
    Ok(SelectionReport {
        method,
        lambda_star: entry.lambda,
        mu_star: s.mu_grid[m],
        breakpoint: i,
        support: entry.support.terms().to_vec(),
        coefficients: entry.refit.clone().expect("selected breakpoints are usable"),
        candidate_terms: a.candidate.terms().to_vec(),
        lambdas: s.lambdas,
        mu_grid: s.mu_grid,
        betti_per_breakpoint: a.betti(),
        criterion_surface: s.values,
        betti_weights: weights,
        mu_selection: cfg.mu_selection,
        degenerate_error: s.degenerate_error,
        degenerate_complexity: s.degenerate_complexity,
    })
}

/// Compound-criterion selection; ties prefer the larger λ, then the smaller μ.
pub fn select_model(a: &AnnotatedPath, cfg: &CriterionConfig) -> Result<SelectionReport> {
    let s = compound_criterion(a, cfg)?;
    report(a, s, cfg, "cc".into(), Some(cfg.betti_weights.clone()))
}

pub fn select_maic(a: &AnnotatedPath, cfg: &CriterionConfig) -> Result<SelectionReport> {
    let s = maic(a, cfg)?;
    report(a, s, cfg, "maic".into(), None)
}

/// LARS-OLS: the refit with the smallest error term.
pub fn select_lars_ols(a: &AnnotatedPath, mode: ErrorMode) -> Result<SelectionReport> {
    let cfg = CriterionConfig { mu_grid: vec![0.0], betti_weights: vec![1.0], mode, mu_selection: MuSelection::Joint };
    let s = compound_criterion(a, &cfg)?;
    report(a, s, &cfg, "lars-ols".into(), None)
}

/// Plain LASSO: the un-refitted path coefficients with the smallest error
/// term; ties prefer the larger λ.
pub fn select_lasso(a: &AnnotatedPath, mode: ErrorMode) -> Result<MethodOutcome> {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in a.entries.iter().enumerate().rev() {
        if let Some(v) = e.lasso_errors.term(mode) {
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    let (i, _) = best.ok_or_else(|| Error::SelectionFailed("no breakpoint has an error term".into()))?;
    let e = &a.entries[i];
    Ok(MethodOutcome { method: "lasso".into(), lambda: Some(e.lambda), mu: None, coefficients: e.lasso_coefficients.clone() })
}

/// Support of a coefficient vector over the candidate terms.
pub fn support_of(candidate: &ModelSupport, coefficients: &[f64]) -> ModelSupport {
    candidate.select(|j| coefficients[j] != 0.0)
}
