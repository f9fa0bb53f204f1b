use super::functionals::functional_h1;
use crate::dynamics::ModelParams;
use crate::spectral::FieldState;
use crate::zhidkov::{dx_sobolev_norm_sq, sq_dev};
use crate::{Error, Result};

/// `(1/6)‖∂x f‖² + (α²ρ²/6)‖|f|²-ρ²‖²`.
pub fn coercivity_lower_bound(f: &FieldState, p: &ModelParams) -> f64 {
    let d2 = dx_sobolev_norm_sq(f.grid(), f.values(), 0.0);
    let g = sq_dev(f);
    d2 / 6.0 + p.alpha * p.alpha * p.rho * p.rho / 6.0 * g * g
}

/// `H₁(f) - lower bound`; nonnegative whenever `β ≥ 0`.
pub fn coercivity_gap(f: &FieldState, p: &ModelParams) -> Result<f64> {
    Ok(functional_h1(f, p)? - coercivity_lower_bound(f, p))
}

/// Upper bound for `E¹_ρ(u)` from the value of `H₁` on a box of length `L`
/// (`α ≠ 0`, `β ≥ 0`).
///
/// `‖∂u‖² ≤ 6H₁`, `‖w‖² ≤ 6H₁/(α²ρ²)` for `w = |u|²-ρ²`, and on the circle
/// `‖w‖²_∞ ≤ ‖w‖²/L + ‖w‖‖∂w‖` with `‖∂w‖ ≤ 2‖u‖_∞‖∂u‖`. With
/// `M = ‖u‖_∞` this gives `M² ≤ ρ² + (G²/L + 2MGD)^{1/2}`; the largest
/// solution bounds `M`.
pub fn apriori_e1_bound(h1: f64, p: &ModelParams, length: f64) -> Result<f64> {
    if !p.is_defocusing() {
        return Err(Error::invalid(
            "params",
            "bound requires alpha != 0 and beta >= 0",
        ));
    }
    if !(h1 >= 0.0 && h1.is_finite()) {
        return Err(Error::invalid(
            "h1",
            format!("must be finite and nonnegative, got {h1}"),
        ));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid("length", "must be positive"));
    }
    let rho2 = p.rho * p.rho;
    let d = (6.0 * h1).sqrt();
    let g = (6.0 * h1 / (p.alpha * p.alpha * rho2)).sqrt();
    let excess = |m: f64| m * m - rho2 - (g * g / length + 2.0 * m * g * d).sqrt();
    // excess is negative at M = ρ and grows like M²
    let mut lo = p.rho;
    let mut hi = p.rho.max(1.0);
    while excess(hi) <= 0.0 {
        hi *= 2.0;
    }
    if excess(lo) > 0.0 {
        lo = 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(d * d + hi * hi + g)
}

/// `(E¹ + (E¹)^{3/2})(1 + ‖∂²u‖²)`, the integrand of the `H₂` growth bound.
pub fn gronwall_integrand(e1: f64, dxx_sq: f64) -> f64 {
    (e1 + e1.powf(1.5)) * (1.0 + dxx_sq)
}

fn cumulative_trapezoid(times: &[f64], g: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; times.len()];
    for j in 1..times.len() {
        acc[j] = acc[j - 1] + 0.5 * (times[j] - times[j - 1]) * (g[j] + g[j - 1]);
    }
    acc
}

/// `H₂(0) ± C∫₀ᵗ g`: returns the upper envelope `H₂(0) + C∫₀ᵗ g` and the
/// half-width `C∫₀ᵗ g`, per record.
pub fn gronwall_envelope(times: &[f64], g: &[f64], h2_0: f64, c: f64) -> (Vec<f64>, Vec<f64>) {
    let width: Vec<f64> = cumulative_trapezoid(times, g)
        .into_iter()
        .map(|v| c * v)
        .collect();
    (width.iter().map(|w| h2_0 + w).collect(), width)
}

/// Smallest `C` with `|H₂(t) - H₂(0)| ≤ C∫₀ᵗ g` on records with
/// `t ≤ t_cal`, times `safety`.
pub fn calibrate_gronwall(
    times: &[f64],
    g: &[f64],
    h2: &[f64],
    t_cal: f64,
    safety: f64,
) -> Result<f64> {
    if times.len() != g.len() || times.len() != h2.len() || times.len() < 2 {
        return Err(Error::invalid(
            "records",
            "need matching series of length >= 2",
        ));
    }
    let integral = cumulative_trapezoid(times, g);
    let mut c = 0.0f64;
    for j in 1..times.len() {
        if times[j] - times[0] > t_cal {
            break;
        }
        if integral[j] > 0.0 {
            c = c.max((h2[j] - h2[0]).abs() / integral[j]);
        }
    }
    Ok(safety * c)
}
