//! Steady-state quadrature squeezing of a cavity mode driven by coherent light
//! and coupled to a single two-level atom.
//!
//! * [`closed_form`] and [`superposition`] evaluate the analytic steady state
//!   of one cavity and of the superposed mode of two identical cavities.
//! * [`dynamics`] integrates the atomic moment equations to that steady state.
//! * [`oracle`] solves the standard Lindblad master equation on a truncated
//!   Fock space as an independent point of comparison.
//! * [`sweep`] produces the drive-amplitude sweeps and identity checks.

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod oracle;
pub mod params;
pub mod superposition;
pub mod sweep;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use error::{Result, SqueezeError};
pub use params::SystemParams;

/// Complex number in serialized output, as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}
