//! `bqec` — batch front-end for the bqec-core toolkit.
//!
//! Every subcommand writes its results as CSV plus a JSON run manifest into
//! the output directory and prints a short human-readable summary.

mod commands;
mod config;
mod format;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use commands::{CapacityArgs, DistillArgs, GkpSingleArgs, SurfaceArgs, ThresholdArgs, TmsArgs};
use reproduce::ReproduceArgs;

/// Exit status for bad configuration, unreadable input or invalid arguments.
const EXIT_CONFIG: u8 = 2;
/// Exit status for a numerical failure inside a computation.
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bqec",
    version,
    about = "GKP bosonic error-correction experiments"
)]
struct Cli {
    /// Directory for CSV results and run manifests.
    #[arg(long, global = true, default_value = "bqec-out")]
    out: PathBuf,

    /// Flat `key = value` file with defaults for surface-sim and threshold
    /// (keys: distance, sigma, sigma_gkp, use_analog_info, trials, seed,
    /// case). Command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo logical error rates of the surface-GKP code.
    SurfaceSim(SurfaceArgs),
    /// Logical error rate curves for several distances and their crossings.
    Threshold(ThresholdArgs),
    /// Failure probability of a single- or two-mode GKP lattice code.
    GkpSingle(GkpSingleArgs),
    /// Quantum-capacity bounds of thermal-loss channels.
    Capacity(CapacityArgs),
    /// Optimal gain and logical noise of the GKP two-mode-squeezing code.
    Tms(TmsArgs),
    /// Triorthogonality check and output variance of a distillation matrix.
    Distill(DistillArgs),
    /// Emit the data series behind one of the standard plots.
    Reproduce(ReproduceArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => config::ConfigFile::load(path)?,
        None => config::ConfigFile::default(),
    };
    let ctx = output::RunContext::new(cli.out, cli.config)?;
    match cli.command {
        Command::SurfaceSim(args) => commands::surface_sim(&ctx, &file, args),
        Command::Threshold(args) => commands::threshold(&ctx, &file, args),
        Command::GkpSingle(args) => commands::gkp_single(&ctx, args),
        Command::Capacity(args) => commands::capacity(&ctx, args),
        Command::Tms(args) => commands::tms(&ctx, args),
        Command::Distill(args) => commands::distill(&ctx, args),
        Command::Reproduce(args) => reproduce::reproduce(&ctx, args),
    }
}

/// Sizes the global worker pool from `BQEC_THREADS` (unset or 0 = one
/// worker per core).
fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("BQEC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("BQEC_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("could not configure the worker pool")?;
    }
    Ok(())
}

/// Numerical failures get their own status; everything else is a usage or
/// input problem.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numeric = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<bqec_core::Error>(),
            Some(bqec_core::Error::Numeric(_))
        )
    });
    if numeric {
        EXIT_NUMERIC
    } else {
        EXIT_CONFIG
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_failures_map_to_status_three() {
        let err = anyhow::Error::from(bqec_core::Error::Numeric("no convergence".into()));
        assert_eq!(exit_code(&err), EXIT_NUMERIC);
        assert_eq!(exit_code(&err.context("while scanning")), EXIT_NUMERIC);
    }

    #[test]
    fn other_failures_map_to_status_two() {
        let err = anyhow::Error::from(bqec_core::Error::Domain("eta".into()));
        assert_eq!(exit_code(&err), EXIT_CONFIG);
        assert_eq!(exit_code(&anyhow::anyhow!("unreadable")), EXIT_CONFIG);
    }
}
