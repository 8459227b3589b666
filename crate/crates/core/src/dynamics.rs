//! Time integration of the atomic moment equations left after the cavity
//! field is adiabatically eliminated.
//!
//! The populations obey `d eta_b/dt = -d eta_a/dt`, which is what the
//! underlying Heisenberg equations give and what keeps `eta_a + eta_b = 1`.

use std::io::{self, Write};
use std::ops::{Add, Mul};

use serde::Serialize;

use crate::closed_form::AtomSteady;
use crate::error::{Result, SqueezeError};
use crate::format::sci;
use crate::params::SystemParams;

/// Slack allowed on populations before a step is rejected as too large.
const POPULATION_SLACK: f64 = 1e-6;

/// `(<sigma>, eta_a, eta_b)` with the coherence split into real and imaginary parts.
/// Also used for the time derivative of the same quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomMomentState {
    pub sigma_re: f64,
    pub sigma_im: f64,
    pub eta_a: f64,
    pub eta_b: f64,
}

impl AtomMomentState {
    pub const GROUND: AtomMomentState = AtomMomentState {
        sigma_re: 0.0,
        sigma_im: 0.0,
        eta_a: 0.0,
        eta_b: 1.0,
    };

    pub const EXCITED: AtomMomentState = AtomMomentState {
        sigma_re: 0.0,
        sigma_im: 0.0,
        eta_a: 1.0,
        eta_b: 0.0,
    };

    pub fn norm(&self) -> f64 {
        (self.sigma_re.powi(2) + self.sigma_im.powi(2) + self.eta_a.powi(2) + self.eta_b.powi(2))
            .sqrt()
    }

    pub fn population_sum(&self) -> f64 {
        self.eta_a + self.eta_b
    }
}

impl Add for AtomMomentState {
    type Output = AtomMomentState;

    fn add(self, rhs: AtomMomentState) -> AtomMomentState {
        AtomMomentState {
            sigma_re: self.sigma_re + rhs.sigma_re,
            sigma_im: self.sigma_im + rhs.sigma_im,
            eta_a: self.eta_a + rhs.eta_a,
            eta_b: self.eta_b + rhs.eta_b,
        }
    }
}

impl Mul<AtomMomentState> for f64 {
    type Output = AtomMomentState;

    fn mul(self, rhs: AtomMomentState) -> AtomMomentState {
        AtomMomentState {
            sigma_re: self * rhs.sigma_re,
            sigma_im: self * rhs.sigma_im,
            eta_a: self * rhs.eta_a,
            eta_b: self * rhs.eta_b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Integration stops once the derivative norm drops below this.
    pub steady_tol: f64,
    /// Record every `sample_stride`-th step; the first and last states are always kept.
    pub sample_stride: usize,
}

impl IntegratorConfig {
    /// `dt = 0.01 / max(gamma_c, kappa)`, `t_max = 1e4 / gamma_c`, `steady_tol = 1e-12`.
    pub fn for_params(params: &SystemParams) -> Self {
        IntegratorConfig {
            dt: 0.01 / params.gamma_c().max(params.kappa()),
            t_max: 1e4 / params.gamma_c(),
            steady_tol: 1e-12,
            sample_stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(SqueezeError::invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !self.t_max.is_finite() || self.t_max < self.dt {
            return Err(SqueezeError::invalid(
                "t_max",
                format!("must be finite and >= dt, got {}", self.t_max),
            ));
        }
        if !self.steady_tol.is_finite() || self.steady_tol <= 0.0 {
            return Err(SqueezeError::invalid(
                "steady_tol",
                format!("must be > 0, got {}", self.steady_tol),
            ));
        }
        if self.sample_stride == 0 {
            return Err(SqueezeError::invalid("sample_stride", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    #[serde(flatten)]
    pub state: AtomMomentState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
    pub steps: usize,
    /// Derivative norm at the final state.
    pub final_rate_norm: f64,
    /// Largest `|eta_a + eta_b - 1|` over every accepted step.
    pub max_population_drift: f64,
}

impl TimeSeries {
    pub fn final_state(&self) -> AtomMomentState {
        self.samples.last().expect("a trajectory always holds its initial state").state
    }

    pub const CSV_HEADER: &'static str = "t,sigma_re,sigma_im,eta_a,eta_b";

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{}",
                sci(s.t),
                sci(s.state.sigma_re),
                sci(s.state.sigma_im),
                sci(s.state.eta_a),
                sci(s.state.eta_b)
            )?;
        }
        Ok(())
    }
}

pub fn moment_derivative(state: &AtomMomentState, params: &SystemParams) -> AtomMomentState {
    let gc = params.gamma_c();
    let drive = 2.0 * params.g() * params.epsilon() / params.kappa();
    let inversion = state.eta_b - state.eta_a;
    let d_eta_a = -gc * state.eta_a + drive * 2.0 * state.sigma_re;
    AtomMomentState {
        sigma_re: -0.5 * gc * state.sigma_re + drive * inversion,
        sigma_im: -0.5 * gc * state.sigma_im,
        eta_a: d_eta_a,
        eta_b: -d_eta_a,
    }
}

fn rk4_step(state: &AtomMomentState, params: &SystemParams, dt: f64) -> AtomMomentState {
    let k1 = moment_derivative(state, params);
    let k2 = moment_derivative(&(*state + (0.5 * dt) * k1), params);
    let k3 = moment_derivative(&(*state + (0.5 * dt) * k2), params);
    let k4 = moment_derivative(&(*state + dt * k3), params);
    *state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

fn populations_in_range(s: &AtomMomentState) -> bool {
    let ok = |p: f64| (-POPULATION_SLACK..=1.0 + POPULATION_SLACK).contains(&p);
    ok(s.eta_a) && ok(s.eta_b)
}

/// Fixed-step classical RK4 from `initial` until the derivative norm falls
/// below `cfg.steady_tol`.
pub fn integrate(
    initial: AtomMomentState,
    params: &SystemParams,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    cfg.validate()?;
    let mut state = initial;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut samples = vec![Sample { t, state }];
    let mut max_drift = (state.population_sum() - 1.0).abs();
    // a ratio within rounding of an integer should not buy an extra step
    let max_steps = (cfg.t_max / cfg.dt * (1.0 - 1e-12)).ceil() as usize;

    loop {
        let rate = moment_derivative(&state, params).norm();
        if rate < cfg.steady_tol {
            if samples.last().map(|s| s.t) != Some(t) {
                samples.push(Sample { t, state });
            }
            return Ok(TimeSeries {
                samples,
                steps,
                final_rate_norm: rate,
                max_population_drift: max_drift,
            });
        }
        if steps >= max_steps {
            return Err(SqueezeError::NonConvergence {
                t,
                norm: rate,
                tol: cfg.steady_tol,
            });
        }

        state = rk4_step(&state, params, cfg.dt);
        steps += 1;
        // t accumulated from the step count avoids summation drift
        t = steps as f64 * cfg.dt;
        if !populations_in_range(&state) {
            return Err(SqueezeError::StepTooLarge {
                t,
                eta_a: state.eta_a,
                eta_b: state.eta_b,
            });
        }
        max_drift = max_drift.max((state.population_sum() - 1.0).abs());
        if steps.is_multiple_of(cfg.sample_stride) {
            samples.push(Sample { t, state });
        }
    }
}

/// Steady state reached from the atomic ground state.
pub fn steady_by_integration(params: &SystemParams, cfg: &IntegratorConfig) -> Result<AtomSteady> {
    let series = integrate(AtomMomentState::GROUND, params, cfg)?;
    let end = series.final_state();
    Ok(AtomSteady {
        eta_a: end.eta_a,
        eta_b: end.eta_b,
        sigma: end.sigma_re,
    })
}
