use std::fmt::Write;
use std::path::PathBuf;

use clap::Args;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use topolasso::regression::{build_split_design, cv_lasso, nonnegative_garrote, SplitDesign};
use topolasso::selection::{
    annotate_path, default_mu_grid, select_lars_ols, select_lasso, select_maic, select_model, AnnotationContext,
    BettiPreset, CriterionConfig, ErrorMode, MethodOutcome, MuSelection,
};
use topolasso::{enumerate_candidate_terms, lasso_path, DesignConfig, PathScaling, SelectionReport, Term};

use crate::error::{CliError, CliResult};
use crate::io::read_csv;
use crate::manifest::RunManifest;

pub const DEFAULT_SEED: u64 = 20_111_969;

#[derive(Args, Clone, Debug, Serialize)]
pub struct SelectArgs {
    pub csv: PathBuf,
    /// Response column name.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// Highest interaction order.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Comma list of cc, maic, lars-ols, lasso, cv, nng.
    #[arg(long, default_value = "cc")]
    pub method: String,
    /// Betti weights for cc: a preset (all, no0, higher, lower) or a comma list.
    #[arg(long, default_value = "no0")]
    pub betti_weights: String,
    /// Weight grid for cc and maic: `start:stop:step` or a comma list.
    #[arg(long)]
    pub mu_grid: Option<String>,
    /// Train, validation and test fractions.
    #[arg(long, default_value = "0.5,0.25,0.25")]
    pub splits: String,
    /// Seed for the split shuffle and the CV folds.
    #[arg(long, env = "TOPOLASSO_SEED")]
    pub seed: Option<u64>,
    /// Folds for cv.
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectMethod {
    Cc,
    Maic,
    LarsOls,
    Lasso,
    Cv,
    Nng,
}

impl SelectMethod {
    fn parse(s: &str) -> CliResult<Self> {
        Ok(match s.trim() {
            "cc" => Self::Cc,
            "maic" => Self::Maic,
            "lars-ols" => Self::LarsOls,
            "lasso" => Self::Lasso,
            "cv" | "lasso-cv" => Self::Cv,
            "nng" => Self::Nng,
            other => {
                return Err(CliError::Input(format!(
                    "unknown method `{other}` (expected cc, maic, lars-ols, lasso, cv, nng)"
                )))
            }
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Cc => "cc",
            Self::Maic => "maic",
            Self::LarsOls => "lars-ols",
            Self::Lasso => "lasso",
            Self::Cv => "cv",
            Self::Nng => "nng",
        }
    }
}

/// Options after defaults and presets are resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSelect {
    pub response: String,
    pub order: usize,
    pub methods: Vec<SelectMethod>,
    pub betti_preset: Option<String>,
    pub betti_weights: Vec<f64>,
    pub mu_grid: Vec<f64>,
    pub splits: [f64; 3],
    pub seed: u64,
    pub folds: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelectedModel {
    pub method: SelectMethod,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub support: Vec<Term>,
    pub term_names: Vec<String>,
    /// Over the candidate terms, on the standardized design.
    pub coefficients: Vec<f64>,
    pub validation_rss: f64,
    /// Mean squared prediction error on the test rows, in response units.
    pub test_mse: f64,
    /// Full criterion surface for cc and maic.
    pub report: Option<SelectionReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelectReport {
    pub manifest: RunManifest,
    pub predictors: Vec<String>,
    pub response: String,
    pub rows: [usize; 3],
    pub candidate_terms: usize,
    pub path_breakpoints: usize,
    pub models: Vec<SelectedModel>,
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("{what}: `{}` is not a number", t.trim())))
        })
        .collect()
}

/// `start:stop:step` or a comma list.
pub fn parse_mu_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(s, "mu grid"),
        [a, b, c] => {
            let v = parse_list(&format!("{a},{b},{c}"), "mu grid")?;
            let (start, stop, step) = (v[0], v[1], v[2]);
            if !(step > 0.0) || stop < start {
                return Err(CliError::Input(format!("mu grid `{s}` needs start <= stop and step > 0")));
            }
            let steps = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=steps).map(|i| (start + i as f64 * step).min(stop)).collect())
        }
        _ => Err(CliError::Input(format!("mu grid `{s}` is neither a list nor start:stop:step"))),
    }
}

/// A preset name or an explicit weight list of length `k`.
pub fn parse_betti_weights(s: &str, k: usize) -> CliResult<(Option<String>, Vec<f64>)> {
    if let Some(p) = BettiPreset::parse(s.trim()) {
        return Ok((Some(p.name().to_string()), p.weights(k)));
    }
    let w = parse_list(s, "betti weights")?;
    if w.len() != k {
        return Err(CliError::Input(format!("{} Betti weights given for order {k}; need {k}", w.len())));
    }
    Ok((None, w))
}

fn parse_splits(s: &str) -> CliResult<[f64; 3]> {
    let v = parse_list(s, "splits")?;
    <[f64; 3]>::try_from(v).map_err(|_| CliError::Input(format!("splits `{s}` must list three fractions")))
}

pub fn resolve(args: &SelectArgs) -> CliResult<ResolvedSelect> {
    let mut methods = Vec::new();
    for m in args.method.split(',') {
        let m = SelectMethod::parse(m)?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let (betti_preset, betti_weights) = parse_betti_weights(&args.betti_weights, args.order)?;
    Ok(ResolvedSelect {
        response: args.response.clone(),
        order: args.order,
        methods,
        betti_preset,
        betti_weights,
        mu_grid: args.mu_grid.as_deref().map(parse_mu_grid).transpose()?.unwrap_or_else(default_mu_grid),
        splits: parse_splits(&args.splits)?,
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        folds: args.folds,
    })
}

fn rss(x: &DMatrix<f64>, y: &DVector<f64>, beta: &[f64]) -> f64 {
    (y - x * DVector::from_column_slice(beta)).norm_squared()
}

fn term_name(t: Term, predictors: &[String]) -> String {
    t.indices().map(|i| predictors[i].as_str()).collect::<Vec<_>>().join(":")
}

pub fn run_select(args: &SelectArgs) -> CliResult<SelectReport> {
    let opts = resolve(args)?;
    let data = read_csv(&args.csv, &args.response)?;
    let p = data.dataset.p();
    if opts.order == 0 || opts.order > p {
        return Err(CliError::Input(format!("order {} must lie in 1..={p}", opts.order)));
    }
    let candidate = enumerate_candidate_terms(p, opts.order)?;
    let dataset = data.dataset.clone().with_random_splits(opts.splits, opts.seed)?;
    let SplitDesign { train, validation, test } = build_split_design(&dataset, &candidate, DesignConfig::standard())?;
    if validation.1.is_empty() || test.1.is_empty() {
        return Err(CliError::Input("validation and test splits must both be nonempty".into()));
    }
    let (xt, yt) = (&train.x, &train.y);
    let path = lasso_path(xt, yt, &candidate, PathScaling::PerObservation)?;
    let annotated = annotate_path(
        &path,
        AnnotationContext {
            train: (xt, yt),
            validation: (&validation.0, &validation.1),
            held_out: Some((&test.0, &test.1)),
            betti_len: opts.order,
            truth: None,
        },
    )?;
    let mode = ErrorMode::Validation;
    let scale2 = train.standardizer.response_scale.powi(2);
    let method_err = |m: SelectMethod| move |e: topolasso::Error| CliError::Method(format!("{}: {e}", m.name()));

    let mut models = Vec::new();
    for &m in &opts.methods {
        let (outcome, report): (MethodOutcome, Option<SelectionReport>) = match m {
            SelectMethod::Cc => {
                let cfg = CriterionConfig::new(opts.mu_grid.clone(), opts.betti_weights.clone(), mode, MuSelection::HeldOut)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                let r = select_model(&annotated, &cfg).map_err(method_err(m))?;
                (r.outcome(), Some(r))
            }
            SelectMethod::Maic => {
                let cfg = CriterionConfig::new(
                    opts.mu_grid.clone(),
                    BettiPreset::AllCycles.weights(opts.order),
                    mode,
                    MuSelection::HeldOut,
                )
                .map_err(|e| CliError::Input(e.to_string()))?;
                let r = select_maic(&annotated, &cfg).map_err(method_err(m))?;
                (r.outcome(), Some(r))
            }
            SelectMethod::LarsOls => {
                let r = select_lars_ols(&annotated, mode).map_err(method_err(m))?;
                (r.outcome(), Some(r))
            }
            SelectMethod::Lasso => (select_lasso(&annotated, mode).map_err(method_err(m))?, None),
            SelectMethod::Cv => {
                let cv = cv_lasso(xt, yt, &candidate, opts.folds, opts.seed).map_err(method_err(m))?;
                let o = MethodOutcome { method: "cv".into(), lambda: Some(cv.lambda), mu: None, coefficients: cv.coefficients };
                (o, None)
            }
            SelectMethod::Nng => {
                let g = nonnegative_garrote(xt, yt, None).map_err(method_err(m))?;
                // Validation error picks λ; ties go to the larger λ (earlier in the grid).
                let mut best: Option<(usize, f64)> = None;
                for (i, c) in g.coefficients.iter().enumerate() {
                    let v = rss(&validation.0, &validation.1, c);
                    if best.map_or(true, |(_, b)| v < b) {
                        best = Some((i, v));
                    }
                }
                let (i, _) = best.ok_or_else(|| CliError::Method("nng: empty garrote grid".into()))?;
                let o = MethodOutcome {
                    method: "nng".into(),
                    lambda: Some(g.lambdas[i]),
                    mu: None,
                    coefficients: g.coefficients[i].clone(),
                };
                (o, None)
            }
        };
        let support: Vec<Term> =
            candidate.iter().zip(&outcome.coefficients).filter(|(_, c)| **c != 0.0).map(|(t, _)| t).collect();
        models.push(SelectedModel {
            method: m,
            lambda: outcome.lambda,
            mu: outcome.mu,
            term_names: support.iter().map(|t| term_name(*t, &data.predictors)).collect(),
            support,
            validation_rss: rss(&validation.0, &validation.1, &outcome.coefficients),
            test_mse: rss(&test.0, &test.1, &outcome.coefficients) * scale2 / test.1.len() as f64,
            coefficients: outcome.coefficients,
            report,
        });
    }
    Ok(SelectReport {
        manifest: RunManifest::new("select", &opts, &[&args.csv], Some(opts.seed))?,
        predictors: data.predictors,
        response: data.response,
        rows: [yt.len(), validation.1.len(), test.1.len()],
        candidate_terms: candidate.len(),
        path_breakpoints: path.len(),
        models,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.4}"))
}

pub fn render_select(r: &SelectReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} candidate terms, {} breakpoints; rows train/validation/test = {}/{}/{}",
        r.candidate_terms, r.path_breakpoints, r.rows[0], r.rows[1], r.rows[2]
    );
    let _ = writeln!(out, "{:<10} {:>10} {:>8} {:>6} {:>12}", "method", "lambda", "mu", "terms", "test MSE");
    for m in &r.models {
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>8} {:>6} {:>12.4}",
            m.method.name(),
            opt(m.lambda),
            opt(m.mu),
            m.support.len(),
            m.test_mse
        );
    }
    for m in &r.models {
        let _ = writeln!(out, "\n{} selected terms:", m.method.name());
        if m.term_names.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for name in &m.term_names {
            let _ = writeln!(out, "  {name}");
        }
    }
    out
}
