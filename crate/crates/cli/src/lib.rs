//! Command-line front end: Betti numbers of term lists, LASSO path tables,
//! model selection on CSV data and simulation experiments.
//!
//! Exit codes: 0 success, 1 filesystem failure, 2 bad input, 3 a method's
//! preconditions failed.

pub mod betti;
pub mod error;
pub mod io;
pub mod manifest;
pub mod path;
pub mod select;
pub mod simulate;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "topolasso", version, about = "Topology-aware model selection for polynomial regression")]
pub struct Cli {
    /// Also write `<stem>.json` and `<stem>.txt` into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the text table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closure, face counts and Betti numbers of a term list.
    Betti(betti::BettiArgs),
    /// LASSO path with the support, closure and Betti numbers per breakpoint.
    Path(path::PathArgs),
    /// Select a model on CSV data.
    Select(select::SelectArgs),
    /// Run a simulation experiment from a config file.
    Simulate(simulate::SimulateArgs),
}

/// Text and JSON renderings of one report.
pub struct Rendered {
    pub stem: String,
    pub text: String,
    pub json: serde_json::Value,
}

fn rendered<T: Serialize>(input: &Path, command: &str, report: &T, text: String) -> Rendered {
    let stem = input.file_stem().map_or_else(|| command.to_string(), |s| format!("{}.{command}", s.to_string_lossy()));
    Rendered { stem, text, json: serde_json::to_value(report).expect("reports serialize") }
}

pub fn execute(command: &Command) -> CliResult<Rendered> {
    Ok(match command {
        Command::Betti(a) => {
            let r = betti::run_betti(a)?;
            rendered(&a.termfile, "betti", &r, betti::render_betti(&r))
        }
        Command::Path(a) => {
            let r = path::run_path(a)?;
            rendered(&a.csv, "path", &r, path::render_path(&r))
        }
        Command::Select(a) => {
            let r = select::run_select(a)?;
            rendered(&a.csv, "select", &r, select::render_select(&r))
        }
        Command::Simulate(a) => {
            let r = simulate::run_simulate(a)?;
            rendered(&a.config, "simulate", &r, simulate::render_simulate(&r))
        }
    })
}

fn emit(cli: &Cli, r: &Rendered) -> CliResult<()> {
    let json = serde_json::to_string_pretty(&r.json).expect("values serialize") + "\n";
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        io::write_atomic(&dir.join(format!("{}.json", r.stem)), json.as_bytes())?;
        io::write_atomic(&dir.join(format!("{}.txt", r.stem)), r.text.as_bytes())?;
    }
    if cli.json {
        print!("{json}");
    } else {
        print!("{}", r.text);
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command).and_then(|r| emit(&cli, &r)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("topolasso: {e}");
            e.exit_code()
        }
    }
}
