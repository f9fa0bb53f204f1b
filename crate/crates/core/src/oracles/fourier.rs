use std::f64::consts::PI;

use num_complex::Complex64;

use super::quad::integrate_panels;
use crate::{Error, Result};

/// Integrands decay like `e^{-x}`; beyond this the tail is below 1e-17.
const CUTOFF: f64 = 40.0;
const TOL: f64 = 1e-11;

/// Numeric transform, closed form and, where applicable, the residual of
/// the algebraic identity used to assemble the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCheck {
    pub numeric: Complex64,
    pub closed_form: Complex64,
    pub quadrature_error: f64,
    pub identity_residual: Option<f64>,
}

impl FourierCheck {
    pub fn abs_error(&self) -> f64 {
        (self.numeric - self.closed_form).norm()
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if xi.is_finite() && xi.abs() >= 1e-3 {
        Ok(())
    } else {
        Err(Error::invalid("xi", format!("need |xi| >= 1e-3, got {xi}")))
    }
}

/// `∫₀^X g(x) sin(xξ) dx` with panels short enough to resolve the oscillation.
fn sine_integral(g: impl Fn(f64) -> f64, xi: f64) -> Result<(f64, f64)> {
    let panels = (CUTOFF * xi.abs().max(1.0)).ceil() as usize;
    integrate_panels(|x| g(x) * (x * xi).sin(), 0.0, CUTOFF, panels, TOL)
}

/// `F[tanh(x/2)](ξ)` against `-2iπ cosech(πξ)`, with `F f(ξ) = ∫f e^{-ixξ}`.
///
/// `tanh(x/2) = (tanh(x/2) - 1) + 1`: the first piece is absolutely
/// integrable and the second contributes `∫₀^∞ sin(xξ) dx = 1/ξ` (Abel).
pub fn tanh_fourier_check(xi: f64) -> Result<FourierCheck> {
    check_xi(xi)?;
    let (i, err) = sine_integral(|x| -2.0 / (x.exp() + 1.0), xi)?;
    Ok(FourierCheck {
        numeric: Complex64::new(0.0, -2.0 * (i + 1.0 / xi)),
        closed_form: Complex64::new(0.0, -2.0 * PI / (PI * xi).sinh()),
        quadrature_error: 2.0 * err,
        identity_residual: None,
    })
}

/// `F[p.v. cosech](ξ)` against `-iπ tanh(πξ/2)`. The odd part `sin(xξ)/sinh x`
/// is bounded at the origin, so no regularisation is needed.
pub fn cosech_fourier_check(xi: f64) -> Result<FourierCheck> {
    check_xi(xi)?;
    let g = |x: f64| if x == 0.0 { 0.0 } else { 1.0 / x.sinh() };
    let (i, err) = sine_integral(g, xi)?;
    Ok(FourierCheck {
        numeric: Complex64::new(0.0, -2.0 * i),
        closed_form: Complex64::new(0.0, -PI * (PI * xi / 2.0).tanh()),
        quadrature_error: 2.0 * err,
        identity_residual: None,
    })
}

/// `F[p.v. coth](ξ) = F[tanh(x/2)] + F[p.v. cosech]` against
/// `-iπ coth(πξ/2)`; also reports the residual of
/// `2cosech(2y) + tanh y = coth y` at `y = πξ/2`.
pub fn coth_fourier_check(xi: f64) -> Result<FourierCheck> {
    let t = tanh_fourier_check(xi)?;
    let c = cosech_fourier_check(xi)?;
    let y = PI * xi / 2.0;
    let lhs = 2.0 / (2.0 * y).sinh() + y.tanh();
    let rhs = 1.0 / y.tanh();
    Ok(FourierCheck {
        numeric: t.numeric + c.numeric,
        closed_form: Complex64::new(0.0, -PI / y.tanh()),
        quadrature_error: t.quadrature_error + c.quadrature_error,
        identity_residual: Some((lhs - rhs).abs() / rhs.abs().max(1.0)),
    })
}
