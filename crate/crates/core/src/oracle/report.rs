use serde::{Deserialize, Serialize};

use super::liouvillian::DensityMatrix;
use super::operators::{HilbertConfig, Operators};
use super::solve::{SolverKind, StationarySolution};
use super::{mode_moments, LindbladParams};
use crate::closed_form::{field_moments, mean_photons, quadrature_variances, steady_atom};
use crate::ComplexValue;

pub const FRAMEWORK_NOTE: &str = "different modeling frameworks: the oracle uses the standard \
     commutator [a, a^dag] = 1 and a Lindblad cavity dissipator; the closed forms use the \
     eliminated-cavity commutator with vacuum level gamma_c/kappa";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Adiabatic-elimination steady state of the coupled system.
    ClosedForm,
    /// Exact coherent state of the driven, damped cavity with the atom decoupled (`g = 0`).
    DecoupledCoherentState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleQuantities {
    pub mean_photons: f64,
    pub a_mean: ComplexValue,
    pub a_sq: ComplexValue,
    pub eta_a: f64,
    pub eta_b: f64,
    pub sigma: ComplexValue,
    pub var_plus: f64,
    pub var_minus: f64,
}

impl OracleQuantities {
    fn minus(&self, other: &OracleQuantities) -> OracleQuantities {
        let sub = |a: ComplexValue, b: ComplexValue| ComplexValue {
            re: a.re - b.re,
            im: a.im - b.im,
        };
        OracleQuantities {
            mean_photons: self.mean_photons - other.mean_photons,
            a_mean: sub(self.a_mean, other.a_mean),
            a_sq: sub(self.a_sq, other.a_sq),
            eta_a: self.eta_a - other.eta_a,
            eta_b: self.eta_b - other.eta_b,
            sigma: sub(self.sigma, other.sigma),
            var_plus: self.var_plus - other.var_plus,
            var_minus: self.var_minus - other.var_minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub params: LindbladParams,
    pub gamma_c: f64,
    pub n_cut: usize,
    pub dim: usize,
    pub solver: SolverKind,
    pub iterations: usize,
    pub residual: f64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub reference_kind: ReferenceKind,
    pub framework_note: String,
    pub oracle: OracleQuantities,
    pub reference: OracleQuantities,
    /// `oracle - reference`, informational only.
    pub delta: OracleQuantities,
}

pub fn measure(rho: &DensityMatrix, ops: &Operators) -> OracleQuantities {
    let m = mode_moments(rho, ops);
    let (var_plus, var_minus) = m.quadrature_variances();
    OracleQuantities {
        mean_photons: m.number,
        a_mean: m.a_mean.into(),
        a_sq: m.a_sq.into(),
        eta_a: rho.expect(&ops.eta_a).re,
        eta_b: rho.expect(&ops.eta_b).re,
        sigma: rho.expect(&ops.sigma).into(),
        var_plus,
        var_minus,
    }
}

fn real(x: f64) -> ComplexValue {
    ComplexValue { re: x, im: 0.0 }
}

fn reference(params: &LindbladParams) -> (ReferenceKind, OracleQuantities) {
    match params.system_params() {
        Some(p) => {
            let atom = steady_atom(&p);
            let moments = field_moments(&p);
            let vars = quadrature_variances(&p);
            (
                ReferenceKind::ClosedForm,
                OracleQuantities {
                    mean_photons: mean_photons(&p).n_bar,
                    a_mean: moments.a_mean.into(),
                    a_sq: moments.a_sq.into(),
                    eta_a: atom.eta_a,
                    eta_b: atom.eta_b,
                    sigma: real(atom.sigma),
                    var_plus: vars.var_plus,
                    var_minus: vars.var_minus,
                },
            )
        }
        None => {
            let alpha = 2.0 * params.epsilon / params.kappa;
            (
                ReferenceKind::DecoupledCoherentState,
                OracleQuantities {
                    mean_photons: alpha * alpha,
                    a_mean: real(alpha),
                    a_sq: real(alpha * alpha),
                    eta_a: 0.0,
                    eta_b: 1.0,
                    sigma: real(0.0),
                    var_plus: 1.0,
                    var_minus: 1.0,
                },
            )
        }
    }
}

pub fn oracle_report(
    params: &LindbladParams,
    cfg: &HilbertConfig,
    solution: &StationarySolution,
    ops: &Operators,
) -> OracleReport {
    let oracle = measure(&solution.rho, ops);
    let (reference_kind, reference) = reference(params);
    OracleReport {
        params: *params,
        gamma_c: crate::closed_form::stimulated_decay_rate(params.g, params.kappa),
        n_cut: cfg.n_cut,
        dim: cfg.dim(),
        solver: solution.solver,
        iterations: solution.iterations,
        residual: solution.residual,
        trace_error: solution.rho.trace_error(),
        hermiticity_error: solution.rho.hermiticity_error(),
        min_eigenvalue: solution.rho.min_eigenvalue(),
        reference_kind,
        framework_note: FRAMEWORK_NOTE.to_string(),
        delta: oracle.minus(&reference),
        oracle,
        reference,
    }
}
