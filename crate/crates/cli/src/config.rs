//! Flag and config-file resolution into validated run parameters.

use std::fs;
use std::path::{Path, PathBuf};

use cavity_squeeze::oracle::LindbladParams;
use cavity_squeeze::{SqueezeError, SystemParams};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::commands::Initial;
use crate::CliError;

/// Relative tolerance for accepting both `g` and `gamma_c` on one command line.
pub const RATE_MISMATCH_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. Each may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Stimulated emission decay rate gamma_c = 4 g^2 / kappa
    #[arg(long = "gamma-c", global = true)]
    pub gamma_c: Option<f64>,
    /// Atom-cavity coupling
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Cavity damping rate
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Drive amplitude
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Coherent-light coupling; epsilon = lambda * beta
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Coherent-light amplitude; epsilon = lambda * beta
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Output file (directory for `figures`); stdout when omitted
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// JSON file supplying any flag; command-line values win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. Keys are the flag names in snake case.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gamma_c: Option<f64>,
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub steady_tol: Option<f64>,
    pub sample_stride: Option<usize>,
    pub initial: Option<Initial>,
    pub n_cut: Option<usize>,
    pub tol: Option<f64>,
    pub dim_cap: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// Global flags merged with the config file.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub gamma_c: Option<f64>,
    pub g: Option<f64>,
    pub kappa: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(RunConfig {
            gamma_c: args.gamma_c.or(file.gamma_c),
            g: args.g.or(file.g),
            kappa: args.kappa.or(file.kappa),
            epsilon: args.epsilon.or(file.epsilon),
            lambda: args.lambda.or(file.lambda),
            beta: args.beta.or(file.beta),
            out: args.out.clone().or_else(|| file.out.clone()),
            format: args.format.or(file.format),
            file,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Rates from whichever of `g` / `gamma_c` was given.
    pub fn rates(&self) -> Result<Rates, CliError> {
        let kappa = self
            .kappa
            .ok_or_else(|| CliError::Config("missing --kappa".into()))?;
        match (self.g, self.gamma_c) {
            (None, None) => Err(CliError::Config("one of --g or --gamma-c is required".into())),
            (Some(g), None) => Ok(Rates::Coupling { g, kappa }),
            (None, Some(gamma_c)) => Ok(Rates::Decay { gamma_c, kappa }),
            (Some(g), Some(gamma_c)) => {
                let implied = 4.0 * g * g / kappa;
                let scale = implied.abs().max(gamma_c.abs());
                if (implied - gamma_c).abs() > RATE_MISMATCH_RTOL * scale {
                    return Err(CliError::Config(format!(
                        "--g {g} implies gamma_c = {implied}, inconsistent with --gamma-c {gamma_c}"
                    )));
                }
                Ok(Rates::Decay { gamma_c, kappa })
            }
        }
    }

    /// Drive amplitude from `--epsilon` and/or `--lambda --beta`.
    fn drive(&self) -> Result<(f64, Option<(f64, f64)>), CliError> {
        let coherent = match (self.lambda, self.beta) {
            (Some(l), Some(b)) => Some((l, b)),
            (None, None) => None,
            _ => return Err(CliError::Config("--lambda and --beta must be given together".into())),
        };
        match (self.epsilon, coherent) {
            (Some(eps), c) => Ok((eps, c)),
            (None, Some((l, b))) => Ok((l * b, Some((l, b)))),
            (None, None) => Err(CliError::Config(
                "missing drive: give --epsilon or --lambda with --beta".into(),
            )),
        }
    }

    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        let (epsilon, coherent) = self.drive()?;
        let params = match self.rates()? {
            Rates::Coupling { g, kappa } => SystemParams::new(g, kappa, epsilon)?,
            Rates::Decay { gamma_c, kappa } => SystemParams::from_gamma_c(gamma_c, kappa, epsilon)?,
        };
        match coherent {
            Some((l, b)) => Ok(params.with_coherent_drive(l, b)?),
            None => Ok(params),
        }
    }

    /// Like [`RunConfig::system_params`] but allowing a decoupled atom.
    pub fn lindblad_params(&self) -> Result<LindbladParams, CliError> {
        let (epsilon, coherent) = self.drive()?;
        if let Some((l, b)) = coherent {
            let product = l * b;
            let scale = epsilon.abs().max(product.abs());
            if (epsilon - product).abs() > cavity_squeeze::params::DRIVE_PRODUCT_RTOL * scale {
                return Err(SqueezeError::DriveMismatch { epsilon, product }.into());
            }
        }
        let (g, kappa) = match self.rates()? {
            Rates::Coupling { g, kappa } => (g, kappa),
            Rates::Decay { gamma_c, kappa } => {
                if !(gamma_c.is_finite() && gamma_c >= 0.0) {
                    return Err(CliError::Config(format!("gamma_c must be >= 0, got {gamma_c}")));
                }
                ((gamma_c * kappa).max(0.0).sqrt() / 2.0, kappa)
            }
        };
        Ok(LindbladParams::new(g, kappa, epsilon)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rates {
    Coupling { g: f64, kappa: f64 },
    Decay { gamma_c: f64, kappa: f64 },
}
