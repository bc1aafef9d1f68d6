use std::fmt::Write;

use super::experiment::{ExperimentReport, Moments};

fn cell(m: Option<Moments>) -> String {
    match m {
        Some(m) => format!("{:.2} ({:.2})", m.mean, m.sd),
        None => "-".into(),
    }
}

/// Aligned text tables, one block per ρ: rows are methods, and each σ
/// contributes an average model error and an average number of factors,
/// both as `mean (sd)`.
pub fn render_tables(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let cfg = &report.config;
    let _ = writeln!(
        out,
        "{} ({}): {} true terms, {} candidates, {} replications, n = {}",
        report.preset, report.preset_description, report.true_terms, report.candidate_terms, cfg.replications, cfg.n
    );
    let label_w = cfg.methods.iter().map(|m| m.label().len()).max().unwrap_or(6).max(6);
    let col_w = 16;
    for &rho in &cfg.rhos {
        let cells: Vec<_> = report.cells.iter().filter(|c| c.rho == rho).collect();
        let _ = writeln!(out, "\nrho = {rho}");
        let mut head1 = format!("{:label_w$}", "");
        let mut head2 = format!("{:label_w$}", "Method");
        for c in &cells {
            let _ = write!(head1, "  {:<w$}", format!("sigma = {}", c.sigma), w = 2 * col_w + 2);
            let _ = write!(head2, "  {:<col_w$}  {:<col_w$}", "ME", "Factors");
        }
        let _ = writeln!(out, "{}", head1.trim_end());
        let _ = writeln!(out, "{}", head2.trim_end());
        for (j, m) in cfg.methods.iter().enumerate() {
            let mut row = format!("{:label_w$}", m.label());
            for c in &cells {
                let s = &c.methods[j];
                let _ = write!(row, "  {:<col_w$}  {:<col_w$}", cell(s.model_error), cell(s.support_size));
            }
            let _ = writeln!(out, "{}", row.trim_end());
        }
        for c in &cells {
            for s in c.methods.iter().filter(|s| s.failures > 0) {
                let _ = writeln!(
                    out,
                    "  note: {} failed on {} of {} replications at sigma = {} (first: {})",
                    s.label,
                    s.failures,
                    c.replications,
                    c.sigma,
                    s.failure_notes[0].1
                );
            }
        }
    }
    out
}
