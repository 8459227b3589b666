use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use cavity_squeeze::closed_form::{self, AtomSteady, SingleModeStats};
use cavity_squeeze::dynamics::{integrate, AtomMomentState, IntegratorConfig};
use cavity_squeeze::oracle::{
    build_operators, cutoff_converged, oracle_report, steady_state, HilbertConfig, OracleReport,
    DEFAULT_DIM_CAP,
};
use cavity_squeeze::superposition::{self, SuperposedStats};
use cavity_squeeze::sweep::{FigureData, FigureSpecs, FIGURE_GAMMA_C, FIGURE_KAPPA};
use cavity_squeeze::SystemParams;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::config::{Format, Rates, RunConfig};
use crate::CliError;

const DEFAULT_CUTOFF_TOL: f64 = 1e-8;
const DEFAULT_FIGURE_DIR: &str = "figures";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    /// Atom in the lower level
    Ground,
    /// Atom in the upper level
    Excited,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DynamicsArgs {
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Stop once the derivative norm falls below this
    #[arg(long)]
    pub steady_tol: Option<f64>,
    /// Record every n-th step
    #[arg(long)]
    pub sample_stride: Option<usize>,
    #[arg(long, value_enum)]
    pub initial: Option<Initial>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OracleArgs {
    /// Fixed Fock cutoff; by default the cutoff is doubled from 8 until converged
    #[arg(long)]
    pub n_cut: Option<usize>,
    /// Convergence tolerance on the mean photon number between cutoffs
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest Hilbert-space dimension allowed
    #[arg(long)]
    pub dim_cap: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FiguresArgs {}

fn emit(cfg: &RunConfig, contents: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, contents)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn json_only(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    match cfg.format_or(Format::Json) {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Config(format!("`{command}` only writes json"))),
    }
}

#[derive(Serialize)]
struct SteadyReport {
    params: SystemParams,
    atom: AtomSteady,
    mode: SingleModeStats,
}

pub fn steady(cfg: &RunConfig) -> Result<(), CliError> {
    json_only(cfg, "steady")?;
    let params = cfg.system_params()?;
    let report = SteadyReport {
        params,
        atom: closed_form::steady_atom(&params),
        mode: closed_form::single_mode_stats(&params),
    };
    emit(cfg, &to_json(&report))
}

#[derive(Serialize)]
struct SuperposeReport {
    params: SystemParams,
    superposed: SuperposedStats,
}

pub fn superpose(cfg: &RunConfig) -> Result<(), CliError> {
    json_only(cfg, "superpose")?;
    let params = cfg.system_params()?;
    let report = SuperposeReport {
        params,
        superposed: superposition::superposed_stats(&params),
    };
    emit(cfg, &to_json(&report))
}

pub fn dynamics(cfg: &RunConfig, args: &DynamicsArgs) -> Result<(), CliError> {
    let params = cfg.system_params()?;
    let file = &cfg.file;
    let defaults = IntegratorConfig::for_params(&params);
    let integrator = IntegratorConfig {
        dt: args.dt.or(file.dt).unwrap_or(defaults.dt),
        t_max: args.t_max.or(file.t_max).unwrap_or(defaults.t_max),
        steady_tol: args.steady_tol.or(file.steady_tol).unwrap_or(defaults.steady_tol),
        sample_stride: args
            .sample_stride
            .or(file.sample_stride)
            .unwrap_or(defaults.sample_stride),
    };
    let initial = match args.initial.or(file.initial) {
        None | Some(Initial::Ground) => AtomMomentState::GROUND,
        Some(Initial::Excited) => AtomMomentState::EXCITED,
    };
    let series = integrate(initial, &params, &integrator)?;
    match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            emit(cfg, &String::from_utf8(buf).expect("csv is ascii"))
        }
        Format::Json => emit(cfg, &to_json(&series)),
    }
}

#[derive(Serialize)]
struct CutoffStep {
    n_cut: usize,
    mean_photons: f64,
}

#[derive(Serialize)]
struct OracleOutput {
    cutoff_history: Vec<CutoffStep>,
    #[serde(flatten)]
    report: OracleReport,
}

pub fn oracle(cfg: &RunConfig, args: &OracleArgs) -> Result<(), CliError> {
    json_only(cfg, "oracle")?;
    let params = cfg.lindblad_params()?;
    let file = &cfg.file;
    let dim_cap = args.dim_cap.or(file.dim_cap).unwrap_or(DEFAULT_DIM_CAP);
    let output = match args.n_cut.or(file.n_cut) {
        Some(n_cut) => {
            let hilbert = HilbertConfig { n_cut, dim_cap };
            let solution = steady_state(&params, &hilbert, None)?;
            let ops = build_operators(&hilbert)?;
            let report = oracle_report(&params, &hilbert, &solution, &ops);
            OracleOutput {
                cutoff_history: vec![CutoffStep {
                    n_cut,
                    mean_photons: report.oracle.mean_photons,
                }],
                report,
            }
        }
        None => {
            let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_CUTOFF_TOL);
            let converged = cutoff_converged(&params, tol, dim_cap)?;
            OracleOutput {
                cutoff_history: converged
                    .history
                    .iter()
                    .map(|&(n_cut, mean_photons)| CutoffStep { n_cut, mean_photons })
                    .collect(),
                report: converged.report,
            }
        }
    };
    emit(cfg, &to_json(&output))
}

pub fn figures(cfg: &RunConfig, _args: &FiguresArgs) -> Result<(), CliError> {
    json_only(cfg, "figures")?;
    let (gamma_c, kappa) = if cfg.g.is_none() && cfg.gamma_c.is_none() && cfg.kappa.is_none() {
        (FIGURE_GAMMA_C, FIGURE_KAPPA)
    } else {
        match cfg.rates()? {
            Rates::Decay { gamma_c, kappa } => (gamma_c, kappa),
            Rates::Coupling { g, kappa } => (closed_form::stimulated_decay_rate(g, kappa), kappa),
        }
    };
    let specs = FigureSpecs::for_rates(gamma_c, kappa)?;
    let data = FigureData::generate(&specs)?;
    let dir = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_FIGURE_DIR));
    data.write_to(&dir)?;
    let mut out = io::stdout().lock();
    out.write_all(to_json(&data.summary).as_bytes())?;
    Ok(())
}
