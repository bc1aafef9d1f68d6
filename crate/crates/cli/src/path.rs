use std::fmt::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use topolasso::homology::{betti_numbers, BettiVector};
use topolasso::{build_design, enumerate_candidate_terms, lasso_path, DesignConfig, PathScaling, Term};

use crate::error::{CliError, CliResult};
use crate::io::read_csv;
use crate::manifest::RunManifest;

/// Preprocessing and penalty scale of the reported path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Interactions of standardized mains; λ on the per-observation scale.
    Standard,
    /// Interactions of raw variables, unit-norm columns, unscaled λ (as R's lars).
    Lars,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PathArgs {
    pub csv: PathBuf,
    /// Response column name.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// Highest interaction order.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = Convention::Standard)]
    pub convention: Convention,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathRow {
    pub lambda: f64,
    /// Over `terms`, in order.
    pub coefficients: Vec<f64>,
    pub support: Vec<Term>,
    pub closure: Vec<Term>,
    pub betti: BettiVector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathReport {
    pub manifest: RunManifest,
    pub convention: Convention,
    pub predictors: Vec<String>,
    pub terms: Vec<Term>,
    pub breakpoints: Vec<PathRow>,
}

pub fn run_path(args: &PathArgs) -> CliResult<PathReport> {
    let data = read_csv(&args.csv, &args.response)?;
    let p = data.dataset.p();
    if args.order == 0 || args.order > p {
        return Err(CliError::Input(format!("order {} must lie in 1..={p}", args.order)));
    }
    let terms = enumerate_candidate_terms(p, args.order)?;
    let (config, scaling) = match args.convention {
        Convention::Standard => (DesignConfig::standard(), PathScaling::PerObservation),
        Convention::Lars => (DesignConfig::lars_compat(), PathScaling::UnitNorm),
    };
    let design = build_design(&data.dataset, &terms, config)?;
    let path = lasso_path(&design.x, &design.y, &terms, scaling)?;
    let breakpoints = path
        .breakpoints
        .iter()
        .map(|bp| {
            let closure = bp.support.hierarchical_closure();
            let complex = closure.to_simplicial_complex()?;
            let (betti, _) = betti_numbers(&complex, args.order - 1);
            Ok(PathRow {
                lambda: bp.lambda,
                coefficients: bp.coefficients.clone(),
                support: bp.support.terms().to_vec(),
                closure: closure.terms().to_vec(),
                betti,
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(PathReport {
        manifest: RunManifest::new("path", args, &[&args.csv], None)?,
        convention: args.convention,
        predictors: data.predictors,
        terms: terms.terms().to_vec(),
        breakpoints,
    })
}

fn braces(terms: &[Term]) -> String {
    let inner: Vec<String> = terms.iter().map(|t| t.compact()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Two-decimal table: λ, one column per term, support, closure, Betti.
pub fn render_path(r: &PathReport) -> String {
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["lambda".to_string()];
    header.extend(r.terms.iter().map(|t| t.compact()));
    header.extend(["M".to_string(), "closure".to_string(), "betti".to_string()]);
    cells.push(header);
    for row in &r.breakpoints {
        let mut line = vec![fmt2(row.lambda)];
        line.extend(row.coefficients.iter().map(|c| fmt2(*c)));
        line.extend([braces(&row.support), braces(&row.closure), row.betti.to_string()]);
        cells.push(line);
    }
    let widths: Vec<usize> =
        (0..cells[0].len()).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  "));
    }
    out
}

/// Two decimals without a negative zero.
pub fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}
