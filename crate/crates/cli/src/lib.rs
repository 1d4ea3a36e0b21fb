//! Sweeps, occupation profiles, physical-unit reports and self-checks on top
//! of `bbcap_core`. Every command writes deterministic CSV or text.

pub mod commands;
pub mod config;
pub mod error;

use clap::{Parser, Subcommand};

pub use commands::Figure;
pub use config::{Opts, SweepConfig};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "bbcap", version, about = "Capacities of broadband bosonic channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity factors over an efficiency grid (CSV)
    Sweep(Opts),
    /// Optimal occupation versus scaled frequency (CSV)
    Profile(Opts),
    /// Factors and absolute rates for a given power
    Report(Opts),
    /// CSV data behind one figure, written into --out
    Figure {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        opts: Opts,
    },
    /// Built-in consistency suites; non-zero exit on failure
    Verify(Opts),
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(o) => commands::run_sweep(&o.with_file()?),
        Command::Profile(o) => commands::run_profile(&o.with_file()?),
        Command::Report(o) => commands::run_report(&o.with_file()?),
        Command::Figure { figure, opts } => commands::run_figure(figure, &opts.with_file()?),
        Command::Verify(o) => commands::run_verify(&o.with_file()?),
    }
}
