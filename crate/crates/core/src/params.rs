//! Physical rates of the driven single-atom cavity.
//!
//! All rates share one inverse-time unit; every derived quantity is a
//! dimensionless ratio of rates.

use serde::Serialize;

use crate::error::{Result, SqueezeError};

/// Relative tolerance for `epsilon == lambda * beta`.
pub const DRIVE_PRODUCT_RTOL: f64 = 1e-12;

/// Validated parameter set `(g, kappa, epsilon)` with the derived
/// stimulated-emission decay rate `gamma_c = 4 g^2 / kappa` cached.
///
/// The coupling may be given directly or through `gamma_c`; in the latter
/// case `g = sqrt(gamma_c * kappa) / 2` and the given `gamma_c` is kept
/// verbatim so no rounding is introduced on the path the caller chose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    g: f64,
    kappa: f64,
    epsilon: f64,
    gamma_c: f64,
    #[serde(rename = "lambda", skip_serializing_if = "Option::is_none")]
    lambda_opt: Option<f64>,
    #[serde(rename = "beta", skip_serializing_if = "Option::is_none")]
    beta_opt: Option<f64>,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(SqueezeError::invalid(name, format!("must be finite and > 0, got {value}")));
    }
    Ok(())
}

fn check_drive(value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(SqueezeError::invalid(
            "epsilon",
            format!("must be finite and >= 0, got {value}"),
        ));
    }
    Ok(())
}

/// `true` when `a` and `b` agree to `rtol` relative to the larger magnitude.
pub(crate) fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= rtol * scale
}

impl SystemParams {
    pub fn new(g: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        check_positive("g", g)?;
        check_positive("kappa", kappa)?;
        check_drive(epsilon)?;
        let gamma_c = 4.0 * g * g / kappa;
        check_positive("gamma_c", gamma_c)?;
        Ok(SystemParams {
            g,
            kappa,
            epsilon,
            gamma_c,
            lambda_opt: None,
            beta_opt: None,
        })
    }

    pub fn from_gamma_c(gamma_c: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        check_positive("gamma_c", gamma_c)?;
        check_positive("kappa", kappa)?;
        check_drive(epsilon)?;
        let g = (gamma_c * kappa).sqrt() / 2.0;
        check_positive("g", g)?;
        Ok(SystemParams {
            g,
            kappa,
            epsilon,
            gamma_c,
            lambda_opt: None,
            beta_opt: None,
        })
    }

    /// Attach the coherent-light coupling `lambda` and c-number amplitude
    /// `beta` whose product is the drive amplitude.
    pub fn with_coherent_drive(mut self, lambda: f64, beta: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(SqueezeError::invalid("lambda", "must be finite"));
        }
        if !beta.is_finite() {
            return Err(SqueezeError::invalid("beta", "must be finite"));
        }
        let product = lambda * beta;
        if !rel_close(self.epsilon, product, DRIVE_PRODUCT_RTOL) {
            return Err(SqueezeError::DriveMismatch {
                epsilon: self.epsilon,
                product,
            });
        }
        self.lambda_opt = Some(lambda);
        self.beta_opt = Some(beta);
        Ok(self)
    }

    /// Same rates, different drive. Coherent-drive factors are dropped.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        check_drive(epsilon)?;
        Ok(SystemParams {
            epsilon,
            lambda_opt: None,
            beta_opt: None,
            ..*self
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda_opt
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta_opt
    }

    /// The recurring denominator `8 eps^2 + kappa gamma_c`, strictly positive.
    pub fn denominator(&self) -> f64 {
        8.0 * self.epsilon * self.epsilon + self.kappa * self.gamma_c
    }
}
