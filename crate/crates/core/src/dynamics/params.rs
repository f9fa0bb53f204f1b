use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which nonlocal operator multiplies `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlocalOperator {
    /// `T_δ`, the intermediate-depth operator.
    #[default]
    Tdelta,
    /// The Hilbert transform (`δ = ∞`, Calogero-Moser right-hand side).
    Hilbert,
}

/// Scalars of the equation plus discretisation switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub rho: f64,
    /// `Some(ℓ)` applies `P_{≤ℓ}` on both sides of the nonlinearity.
    #[serde(default)]
    pub moll_level: Option<u32>,
    #[serde(default = "default_dealias")]
    pub dealias: bool,
    #[serde(default)]
    pub nonlocal: NonlocalOperator,
}

fn default_dealias() -> bool {
    true
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, rho: f64) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            delta,
            rho,
            moll_level: None,
            dealias: true,
            nonlocal: NonlocalOperator::Tdelta,
        };
        p.validate()?;
        Ok(p)
    }

    /// `α = β = 1`.
    pub fn inls(delta: f64, rho: f64) -> Result<Self> {
        Self::new(1.0, 1.0, delta, rho)
    }

    pub fn with_moll_level(mut self, level: Option<u32>) -> Self {
        self.moll_level = level;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn with_nonlocal(mut self, op: NonlocalOperator) -> Self {
        self.nonlocal = op;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", "must be finite"));
        }
        if !self.beta.is_finite() {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid(
                "delta",
                format!("must be positive, got {}", self.delta),
            ));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::invalid(
                "rho",
                format!("must be positive, got {}", self.rho),
            ));
        }
        Ok(())
    }

    /// `β = ±|α| ≠ 0`.
    pub fn is_integrable(&self) -> bool {
        self.alpha != 0.0 && (self.beta.abs() - self.alpha.abs()).abs() <= 1e-12 * self.alpha.abs()
    }

    /// `α ≠ 0, β ≥ 0`.
    pub fn is_defocusing(&self) -> bool {
        self.alpha != 0.0 && self.beta >= 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_and_flags() {
        assert!(ModelParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
        let p = ModelParams::inls(1.0, 1.0).unwrap();
        assert!(p.is_integrable() && p.is_defocusing());
        assert!(ModelParams::new(2.0, -2.0, 1.0, 1.0)
            .unwrap()
            .is_integrable());
        assert!(!ModelParams::new(1.0, 0.5, 1.0, 1.0)
            .unwrap()
            .is_integrable());
        assert!(!ModelParams::new(0.0, 0.0, 1.0, 1.0)
            .unwrap()
            .is_integrable());
    }
}
