//! Steady-state closed forms for the single driven cavity mode.
//!
//! With the cavity field adiabatically eliminated, `a = -(2g/kappa) sigma + 2 eps/kappa`,
//! every field moment reduces to the atomic expectations. The nonstandard
//! commutator `[a, a^dag] = (gamma_c/kappa)(eta_b - eta_a)` sets the vacuum level
//! to `gamma_c / kappa` instead of 1.
//!
//! Throughout, `D = 8 eps^2 + kappa gamma_c` (see [`SystemParams::denominator`]).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::params::SystemParams;

/// Steady-state atomic expectations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomSteady {
    /// Upper-level probability.
    pub eta_a: f64,
    /// Lower-level probability, `1 - eta_a`.
    pub eta_b: f64,
    /// Atomic coherence `<sigma>`; real for a real drive.
    pub sigma: f64,
}

/// Mean photon number and its three contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonNumbers {
    pub n_bar: f64,
    pub n_emitted: f64,
    pub n_absorbed: f64,
    pub n_drive: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureVariances {
    pub var_plus: f64,
    pub var_minus: f64,
    pub vac_var: f64,
}

/// Every single-mode steady-state quantity in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleModeStats {
    pub n_bar: f64,
    pub n_emitted: f64,
    pub n_absorbed: f64,
    pub n_drive: f64,
    pub var_plus: f64,
    pub var_minus: f64,
    pub vac_var: f64,
    pub f_a: f64,
    pub f_b: f64,
    pub squeezing: f64,
}

/// Drive amplitude maximizing the plus-quadrature squeezing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalDrive {
    pub epsilon: f64,
    pub squeezing: f64,
}

/// First and second moments of a single bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    /// `<a^dag a>`
    pub number: f64,
    /// `<a a^dag>`
    pub anti_number: f64,
    /// `<a^2>`
    pub a_sq: Complex64,
    /// `<a>`
    pub a_mean: Complex64,
}

impl ModeMoments {
    /// Plus/minus quadrature variances of `a^dag + a` and `i(a^dag - a)`,
    /// expanded in normal and antinormal moments.
    pub fn quadrature_variances(&self) -> (f64, f64) {
        let a = self.a_mean;
        let a_dag = a.conj();
        let sym = self.number + self.anti_number;
        // <a^dag^2> + <a^2> and <a^dag>^2 + <a>^2 are both 2 Re(.)
        let second = 2.0 * self.a_sq.re;
        let first_sq = 2.0 * (a * a).re;
        let cross = 2.0 * (a_dag * a).re;
        let plus = sym + second - first_sq - cross;
        let minus = sym - second + first_sq - cross;
        (plus, minus)
    }
}

/// `gamma_c = 4 g^2 / kappa`; defined (as zero) for `g = 0`.
pub fn stimulated_decay_rate(g: f64, kappa: f64) -> f64 {
    4.0 * g * g / kappa
}

pub fn stimulated_decay(params: &SystemParams) -> f64 {
    stimulated_decay_rate(params.g(), params.kappa())
}

pub fn steady_atom(params: &SystemParams) -> AtomSteady {
    let eps = params.epsilon();
    let d = params.denominator();
    let eta_a = 4.0 * eps * eps / d;
    AtomSteady {
        eta_a,
        eta_b: 1.0 - eta_a,
        sigma: 4.0 * params.g() * eps / d,
    }
}

pub fn mean_photons(params: &SystemParams) -> PhotonNumbers {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    let eps2 = eps * eps;
    let ratio = gc / k;
    PhotonNumbers {
        // 4 eps^2/kappa^2 - (gc/kappa) 4 eps^2/D, rearranged so that small
        // drives do not cancel catastrophically
        n_bar: 32.0 * eps2 * eps2 / (k * k * d),
        n_emitted: ratio * 4.0 * eps2 / d,
        n_absorbed: ratio * 8.0 * eps2 / d,
        n_drive: 4.0 * eps2 / (k * k),
    }
}

/// Quadrature variance of the undriven mode, `gamma_c / kappa`.
pub fn vacuum_variance(params: &SystemParams) -> f64 {
    params.gamma_c() / params.kappa()
}

pub fn quadrature_variances(params: &SystemParams) -> QuadratureVariances {
    let gc = params.gamma_c();
    let eps = params.epsilon();
    let d = params.denominator();
    let vac_var = vacuum_variance(params);
    QuadratureVariances {
        var_plus: vac_var - 16.0 * gc * gc * eps * eps / (d * d),
        var_minus: vacuum_variance(params),
        vac_var,
    }
}

/// Lower bound `f_a` on the product of quadrature uncertainties.
pub fn uncertainty_bound(params: &SystemParams) -> f64 {
    let gc = params.gamma_c();
    gc * gc / params.denominator()
}

/// Product of quadrature uncertainties, `f_b = Delta a_+ Delta a_-`.
///
/// # Panics
///
/// If the radicand is negative, which no valid parameter set can produce.
pub fn uncertainty_product(params: &SystemParams) -> f64 {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    let radicand = gc * gc / (k * k) - 16.0 * gc * gc * gc * eps * eps / (k * d * d);
    assert!(
        radicand >= 0.0,
        "negative uncertainty-product radicand {radicand} for {params:?}"
    );
    radicand.sqrt()
}

/// Plus-quadrature squeezing relative to the vacuum level, in `[0, 1/2]`.
pub fn squeezing(params: &SystemParams) -> f64 {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    // exact value is at most 1/2 (AM-GM on D); the clamp only removes rounding
    (16.0 * gc * k * eps * eps / (d * d)).min(0.5)
}

/// Analytic maximizer of [`squeezing`] over the drive amplitude:
/// `eps* = sqrt(kappa gamma_c / 8)`, at which the squeezing is exactly one half.
pub fn optimal_drive(gamma_c: f64, kappa: f64) -> Result<OptimalDrive> {
    SystemParams::from_gamma_c(gamma_c, kappa, 0.0)?;
    Ok(OptimalDrive {
        epsilon: (kappa * gamma_c / 8.0).sqrt(),
        squeezing: 0.5,
    })
}

/// Field moments from the eliminated-cavity expressions, the inputs to the
/// moment expansion of the quadrature variances.
pub fn field_moments(params: &SystemParams) -> ModeMoments {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    let eps2 = eps * eps;
    let drive = 4.0 * eps2 / (k * k);
    let ratio = gc / k;
    let number = ratio * 4.0 * eps2 / d - ratio * 8.0 * eps2 / d + drive;
    let anti_number = ratio * (k * gc - 4.0 * eps2) / d + drive;
    let a_sq = drive - ratio * 8.0 * eps2 / d;
    let a_mean = 2.0 * eps / k - 2.0 * gc * eps / d;
    ModeMoments {
        number,
        anti_number,
        a_sq: Complex64::new(a_sq, 0.0),
        a_mean: Complex64::new(a_mean, 0.0),
    }
}

pub fn single_mode_stats(params: &SystemParams) -> SingleModeStats {
    let photons = mean_photons(params);
    let vars = quadrature_variances(params);
    SingleModeStats {
        n_bar: photons.n_bar,
        n_emitted: photons.n_emitted,
        n_absorbed: photons.n_absorbed,
        n_drive: photons.n_drive,
        var_plus: vars.var_plus,
        var_minus: vars.var_minus,
        vac_var: vars.vac_var,
        f_a: uncertainty_bound(params),
        f_b: uncertainty_product(params),
        squeezing: squeezing(params),
    }
}

/// Validates `gamma_c, kappa` for callers that work without a drive.
pub(crate) fn check_rates(gamma_c: f64, kappa: f64) -> Result<()> {
    SystemParams::from_gamma_c(gamma_c, kappa, 0.0).map(|_| ())
}
