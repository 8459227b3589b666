//! `squeeze`: closed-form steady states, moment dynamics, the Lindblad oracle
//! and figure data for a coherently driven single-atom cavity.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 configuration error,
//! 3 numerical non-convergence, 4 Hilbert-space dimension cap.
//! Failures print one JSON object on one line to stderr.

mod commands;
mod config;

use std::process::ExitCode;

use cavity_squeeze::SqueezeError;
use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{DynamicsArgs, FiguresArgs, OracleArgs};
use config::{GlobalArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "squeeze", version, about = "Quadrature squeezing of a driven single-atom cavity")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Atomic steady state and single-mode photon statistics
    Steady,
    /// Statistics of the superposed mode of two identical cavities
    Superpose,
    /// Integrate the atomic moment equations to steady state
    Dynamics(DynamicsArgs),
    /// Stationary Lindblad density matrix compared with the closed forms
    Oracle(OracleArgs),
    /// Data for the uncertainty and squeezing figures
    Figures(FiguresArgs),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    DimensionCap(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::DimensionCap(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "non_convergence",
            CliError::DimensionCap(_) => "dimension_cap",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::DimensionCap(m) | CliError::Io(m) => m,
        }
    }
}

impl From<SqueezeError> for CliError {
    fn from(e: SqueezeError) -> Self {
        let msg = e.to_string();
        match e {
            SqueezeError::InvalidParameter { .. } | SqueezeError::DriveMismatch { .. } => CliError::Config(msg),
            SqueezeError::NonConvergence { .. }
            | SqueezeError::StepTooLarge { .. }
            | SqueezeError::SingularSystem(_)
            | SqueezeError::SolverStalled { .. } => CliError::Numerical(msg),
            SqueezeError::DimensionCap { .. } => CliError::DimensionCap(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    exit_code: u8,
    message: &'a str,
}

fn fail(err: &CliError) -> ExitCode {
    let line = ErrorLine {
        error: err.kind(),
        exit_code: err.exit_code(),
        message: err.message(),
    };
    eprintln!("{}", serde_json::to_string(&line).expect("error line serializes"));
    ExitCode::from(err.exit_code())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Steady => commands::steady(&cfg),
        Command::Superpose => commands::superpose(&cfg),
        Command::Dynamics(args) => commands::dynamics(&cfg, &args),
        Command::Oracle(args) => commands::oracle(&cfg, &args),
        Command::Figures(args) => commands::figures(&cfg, &args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ").to_string();
            return fail(&CliError::Config(first));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
