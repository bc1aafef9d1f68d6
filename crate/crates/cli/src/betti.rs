use std::fmt::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topolasso::homology::{betti_numbers, BettiVector, HomologySummary};
use topolasso::terms::parse_term_list;
use topolasso::Term;

use crate::error::CliResult;
use crate::io::read_text;
use crate::manifest::RunManifest;

#[derive(Args, Clone, Debug, Serialize)]
pub struct BettiArgs {
    /// Term list: one term per line as 1-based variable indices.
    pub termfile: PathBuf,
    /// Number of variables (defaults to the largest index used).
    #[arg(long)]
    pub p: Option<usize>,
    /// Highest Betti number to report (defaults to the closure's dimension, at least 1).
    #[arg(long)]
    pub max_dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiReport {
    pub manifest: RunManifest,
    pub support: Vec<Term>,
    pub closure: Vec<Term>,
    pub face_counts: Vec<usize>,
    pub betti: BettiVector,
    pub summary: HomologySummary,
}

pub fn run_betti(args: &BettiArgs) -> CliResult<BettiReport> {
    let support = parse_term_list(&read_text(&args.termfile)?, args.p)?;
    let closure = support.hierarchical_closure();
    let complex = closure.to_simplicial_complex()?;
    let max_dim = args.max_dim.unwrap_or_else(|| complex.dim().unwrap_or(0).max(1));
    let (betti, summary) = betti_numbers(&complex, max_dim);
    Ok(BettiReport {
        manifest: RunManifest::new("betti", args, &[&args.termfile], None)?,
        support: support.terms().to_vec(),
        closure: closure.terms().to_vec(),
        face_counts: complex.face_counts(),
        betti,
        summary,
    })
}

fn braces(terms: &[Term]) -> String {
    let inner: Vec<String> = terms.iter().map(|t| t.compact()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn render_betti(r: &BettiReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "support  {}", braces(&r.support));
    let _ = writeln!(out, "closure  {}", braces(&r.closure));
    if r.face_counts.is_empty() {
        let _ = writeln!(out, "faces    none (void complex)");
    }
    for (d, m) in r.face_counts.iter().enumerate() {
        let _ = writeln!(out, "faces    dim {d}: {m}");
    }
    for s in &r.summary.dims {
        let _ = writeln!(out, "dim {}    cycles {}  boundaries {}  betti {}", s.dim, s.cycles, s.boundaries, s.betti);
    }
    let _ = writeln!(out, "betti    {}", r.betti);
    out
}
