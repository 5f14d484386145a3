//! Numerical thresholds shared by every check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute zero test on unit-scale matrices.
pub const TAU_ZERO: f64 = 1e-10;
/// Relative residual bound for FPK and aggregate identities.
pub const TAU_FPK: f64 = 1e-8;
/// Relative vanishing threshold for bilinear patterns.
pub const TAU_CLASS: f64 = 1e-8;
/// Relative residual bound for the covariant spin-sum fit.
pub const TAU_FIT: f64 = 1e-7;
/// Relative mass-shell tolerance.
pub const TAU_SHELL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub fpk: f64,
    pub class: f64,
    pub fit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { zero: TAU_ZERO, fpk: TAU_FPK, class: TAU_CLASS, fit: TAU_FIT }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau_zero", self.zero), ("tau_fpk", self.fpk), ("tau_class", self.class), ("tau_fit", self.fit)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
