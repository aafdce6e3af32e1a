//! Command-line front end: reads a flat JSON configuration, runs one
//! experiment and writes CSV traces and JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use vibronic_echo::UnitSystem;

pub use config::{EngineKind, Overrides, RunConfig, Setup};
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "vibronic-echo", version, about = "Vibrational photon echo simulator")]
pub struct Cli {
    /// Flat JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<EngineKind>,
    /// Unit system of the outputs.
    #[arg(long, global = true, value_parser = parse_units)]
    pub units: Option<UnitSystem>,
    /// Pulse delay, overriding the configuration.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Area of both pulses (rad), overriding the configuration.
    #[arg(long, global = true)]
    pub area: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Dipole trace of one two-pulse sequence: trace.csv and terms.csv.
    Run,
    /// Echo amplitude over delays with a quartic-decay fit: scan.csv and fit.json.
    ScanTau,
    /// Grid propagation against the closed form: compare.json.
    Compare,
    /// Dephasing and decoherence scales in both unit systems.
    Params,
}

fn parse_units(s: &str) -> Result<UnitSystem, String> {
    s.parse()
}

impl Cli {
    pub fn execute(&self) -> Result<(), CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        config.apply(&Overrides {
            engine: self.engine,
            units: self.units,
            tau: self.tau,
            area: self.area,
        });
        let out = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        match self.command {
            Command::Run => commands::run(&config, &out),
            Command::ScanTau => commands::scan_tau(&config, &out),
            Command::Compare => commands::compare(&config, &out),
            Command::Params => commands::params(&config, self.out.as_deref()),
        }
    }
}
