//! Argument parsing and dispatch shared by the binary and in-process callers.

use std::ffi::OsString;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use crate::commands::{cmd_simulate, cmd_spectrum, cmd_sweep, Outcome, SweepParameter, SweepSpec};
use crate::config::{RunArgs, RunConfig};

/// Quantum walk on a lossy two-sublattice chain: decay distributions,
/// spectra and loss-strength sweeps.
#[derive(Debug, Parser)]
#[command(name = "edgeburst", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one walk; writes decay.csv and metrics.json.
    Simulate(RunArgs),
    /// Open and ring spectra; writes spectrum_open.csv, spectrum_ring.csv, spectral.json.
    Spectrum(RunArgs),
    /// Repeat walk + spectrum over loss strengths; writes sweep.csv and sweep.json.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "gamma")]
        param: SweepParameter,
        /// Comma-separated, strictly increasing values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
}

impl Cli {
    pub fn run(self) -> Result<Outcome> {
        match self.command {
            Command::Simulate(args) => cmd_simulate(&RunConfig::resolve(&args)?),
            Command::Spectrum(args) => cmd_spectrum(&RunConfig::resolve(&args)?),
            Command::Sweep { run, param, values } => {
                let base = RunConfig::resolve(&run)?;
                cmd_sweep(&SweepSpec::new(param, values, base).context("invalid sweep")?)
            }
        }
    }
}

/// Parses `argv` (program name first) and runs the requested command.
pub fn run_args<I, T>(argv: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)?.run()
}
