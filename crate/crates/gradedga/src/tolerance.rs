use crate::error::{GaError, Result};
use num_complex::Complex64;

/// Comparison thresholds used by all tolerance-aware operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Absolute threshold.
    pub eps_abs: f64,
    /// Relative threshold, applied against a caller-supplied scale.
    pub eps_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_abs: 1e-12,
            eps_rel: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(eps_abs: f64, eps_rel: f64) -> Result<Self> {
        if !(eps_abs > 0.0) || !(eps_rel > 0.0) {
            return Err(GaError::InvalidArgument(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(Tolerance { eps_abs, eps_rel })
    }

    /// Default relative threshold with a custom absolute one.
    pub fn absolute(eps_abs: f64) -> Result<Self> {
        Self::new(eps_abs, Tolerance::default().eps_rel)
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale.abs()
    }

    pub fn near_zero(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.threshold(scale)
    }

    pub fn near_zero_c(&self, value: Complex64, scale: f64) -> bool {
        value.norm() <= self.threshold(scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(Tolerance::new(0.0, 1e-10).is_err());
        assert!(Tolerance::new(1e-12, -1.0).is_err());
        assert!(Tolerance::new(1e-12, 1e-10).is_ok());
    }

    #[test]
    fn near_zero_uses_scale() {
        let tol = Tolerance::default();
        assert!(tol.near_zero(1e-13, 0.0));
        assert!(tol.near_zero(5e-9, 100.0));
        assert!(!tol.near_zero(1e-6, 1.0));
    }
}
