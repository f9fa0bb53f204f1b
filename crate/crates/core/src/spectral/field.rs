use num_complex::Complex64;

use super::Grid;
use crate::{Error, Result};

/// Complex samples of `u(·, t)` on a grid, tagged with the background
/// level `ρ` and the time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    grid: Grid,
    values: Vec<Complex64>,
    rho: f64,
    time: f64,
}

impl FieldState {
    pub fn new(grid: Grid, values: Vec<Complex64>, rho: f64, time: f64) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::invalid(
                "values",
                format!("expected {} samples, got {}", grid.n(), values.len()),
            ));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(
                "rho",
                format!("must be positive, got {rho}"),
            ));
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::invalid(
                "time",
                format!("must be non-negative, got {time}"),
            ));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { time });
        }
        Ok(FieldState {
            grid,
            values,
            rho,
            time,
        })
    }

    /// The flat state `u ≡ ρ`.
    pub fn constant(grid: Grid, rho: f64) -> Result<Self> {
        let values = vec![Complex64::new(rho, 0.0); grid.n()];
        Self::new(grid, values, rho, 0.0)
    }

    /// Samples `f(x_j)` at the grid points.
    pub fn from_fn(grid: Grid, rho: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values, rho, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Same grid, `ρ` and time, new samples.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(self.grid.clone(), values, self.rho, self.time)
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn modulus_sq(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid.l2_norm(&self.values)
    }

    pub(crate) fn check_compatible(&self, other: &FieldState) -> Result<()> {
        self.grid.same_as(&other.grid)?;
        if self.rho != other.rho {
            return Err(Error::RhoMismatch(self.rho, other.rho));
        }
        Ok(())
    }
}
