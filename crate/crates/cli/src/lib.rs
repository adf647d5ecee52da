//! Command-line front end for the lossy-lattice walk: configuration
//! handling and the three output-producing subcommands.

pub mod app;
pub mod commands;
pub mod config;

pub use app::{run_args, Cli};
pub use commands::{cmd_simulate, cmd_spectrum, cmd_sweep, Outcome, SweepParameter, SweepSpec};
pub use config::{RunArgs, RunConfig};
