use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topolasso::simulate::{render_tables, run_experiment, ExperimentConfig, ExperimentReport};

use crate::error::CliResult;
use crate::io::read_text;
use crate::manifest::RunManifest;

#[derive(Args, Clone, Debug, Serialize)]
pub struct SimulateArgs {
    /// key=value experiment config.
    pub config: PathBuf,
    /// Worker threads for the replications (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Overrides the config's seed.
    #[arg(long, env = "TOPOLASSO_SEED")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateReport {
    pub manifest: RunManifest,
    pub experiment: ExperimentReport,
}

pub fn run_simulate(args: &SimulateArgs) -> CliResult<SimulateReport> {
    let mut exp = ExperimentConfig::parse(&read_text(&args.config)?)?;
    if let Some(seed) = args.seed {
        exp.seed = seed;
    }
    exp.validate()?;
    topolasso::simulate::preset_by_name(&exp.preset)?;
    // Thread count never changes results, so it stays out of the manifest.
    let manifest = RunManifest::new("simulate", &exp, &[&args.config], Some(exp.seed))?;
    let experiment = run_experiment(&exp, args.jobs)?;
    Ok(SimulateReport { manifest, experiment })
}

pub fn render_simulate(r: &SimulateReport) -> String {
    render_tables(&r.experiment)
}
