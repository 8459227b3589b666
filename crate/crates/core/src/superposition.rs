//! The superposed mode `c = a + i b` of two identical, independent driven
//! single-atom cavities.
//!
//! Each cavity carries its own atom with the same `(g, kappa, eps)`, so every
//! atomic expectation is duplicated and the collective lowering operator
//! `m = sigma_a + i sigma_b` inherits them.

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{mean_photons, steady_atom, ModeMoments};
use crate::params::SystemParams;
use crate::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperposedStats {
    pub n_bar_sup: f64,
    pub var_plus: f64,
    pub var_minus: f64,
    pub vac_var: f64,
    pub f_c: f64,
    pub f_d: f64,
    pub s_plus: f64,
    pub s_minus: f64,
    /// `s_plus + s_minus`
    pub sum: f64,
    pub c_mean: ComplexValue,
    pub c_sq: ComplexValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperposedSqueezing {
    pub s_plus: f64,
    pub s_minus: f64,
    pub sum: f64,
}

pub fn superposed_mean_photons(params: &SystemParams) -> f64 {
    2.0 * mean_photons(params).n_bar
}

/// Vacuum level of either superposed quadrature, `2 gamma_c / kappa`.
pub fn superposed_vacuum_variance(params: &SystemParams) -> f64 {
    2.0 * params.gamma_c() / params.kappa()
}

fn superposed_variance(params: &SystemParams) -> f64 {
    let gc = params.gamma_c();
    let eps = params.epsilon();
    let d = params.denominator();
    superposed_vacuum_variance(params) - 16.0 * gc * gc * eps * eps / (d * d)
}

/// `(var_plus, var_minus, vac_var)`; the two quadratures are squeezed equally.
pub fn superposed_variances(params: &SystemParams) -> (f64, f64, f64) {
    (
        superposed_variance(params),
        superposed_variance(params),
        superposed_vacuum_variance(params),
    )
}

/// `(f_c, f_d)`: the uncertainty lower bound and the actual product
/// `Delta c_+ Delta c_-`.
pub fn superposed_bounds(params: &SystemParams) -> (f64, f64) {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    let eps2 = eps * eps;
    let f_c = 2.0 * gc * gc / d;
    let d2 = d * d;
    let radicand = 4.0 * gc * gc / (k * k) - 64.0 * gc * gc * gc * eps2 / (k * d2)
        + 256.0 * gc.powi(4) * eps2 * eps2 / (d2 * d2);
    assert!(
        radicand >= 0.0,
        "negative superposed uncertainty-product radicand {radicand} for {params:?}"
    );
    (f_c, radicand.sqrt())
}

pub fn superposed_squeezing(params: &SystemParams) -> SuperposedSqueezing {
    let (var_plus, var_minus, vac) = superposed_variances(params);
    let s_plus = (vac - var_plus) / vac;
    let s_minus = (vac - var_minus) / vac;
    SuperposedSqueezing {
        s_plus,
        s_minus,
        sum: s_plus + s_minus,
    }
}

/// `(<c>, <c^2>)`.
pub fn superposed_first_moments(params: &SystemParams) -> (Complex64, Complex64) {
    let (gc, k, eps) = (params.gamma_c(), params.kappa(), params.epsilon());
    let d = params.denominator();
    let one_plus_i = Complex64::new(1.0, 1.0);
    let amplitude = 2.0 * eps / k - 2.0 * gc * eps / d;
    let c_sq = 8.0 * eps * eps / (k * k) - 16.0 * gc * eps * eps / (k * d);
    (one_plus_i * amplitude, Complex64::new(0.0, c_sq))
}

/// Moments of `c` assembled from the duplicated single-cavity atomic
/// expectations, for the moment-expansion route to the variances.
pub fn superposed_moments(params: &SystemParams) -> ModeMoments {
    let (g, gc, k, eps) = (params.g(), params.gamma_c(), params.kappa(), params.epsilon());
    let atom = steady_atom(params);
    let ratio = gc / k;
    let drive = 8.0 * eps * eps / (k * k);
    let coherence = 8.0 * g * eps / (k * k) * (2.0 * atom.sigma);
    let (c_mean, c_sq) = superposed_first_moments(params);
    ModeMoments {
        number: ratio * 2.0 * atom.eta_a - coherence + drive,
        anti_number: ratio * 2.0 * atom.eta_b - coherence + drive,
        a_sq: c_sq,
        a_mean: c_mean,
    }
}

pub fn superposed_stats(params: &SystemParams) -> SuperposedStats {
    let (var_plus, var_minus, vac_var) = superposed_variances(params);
    let (f_c, f_d) = superposed_bounds(params);
    let sq = superposed_squeezing(params);
    let (c_mean, c_sq) = superposed_first_moments(params);
    SuperposedStats {
        n_bar_sup: superposed_mean_photons(params),
        var_plus,
        var_minus,
        vac_var,
        f_c,
        f_d,
        s_plus: sq.s_plus,
        s_minus: sq.s_minus,
        sum: sq.sum,
        c_mean: c_mean.into(),
        c_sq: c_sq.into(),
    }
}
