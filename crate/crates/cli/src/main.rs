use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;
use legquad_bench::{emit_report, parse_tolerances, run, Algorithm, Format, Mode, RunSpec};

/// Runs the legquad benchmark experiments and prints a table.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    /// Experiment: lk, battery, divergence or probe.
    #[arg(long, default_value = "lk")]
    mode: Mode,
    /// Algorithms: all, or a comma-separated subset of naive, refined, simpson.
    #[arg(long = "alg", default_value = "all")]
    algorithms: String,
    /// Comma-separated relative tolerances (default depends on the mode).
    #[arg(long = "tol")]
    tolerances: Option<String>,
    /// Realizations per cell.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: csv or md.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Evaluation budget per integration.
    #[arg(long)]
    budget: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let args = Args::parse();
    let spec = RunSpec {
        mode: args.mode,
        algorithms: Algorithm::parse_list(&args.algorithms)?,
        tolerances: match &args.tolerances {
            Some(t) => parse_tolerances(t)?,
            None => args.mode.default_tolerances(),
        },
        realizations: args.runs,
        seed: args.seed,
        format: args.format,
        budget: args.budget,
    };
    spec.validate()?;
    let text = emit_report(&run(&spec)?, spec.format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
