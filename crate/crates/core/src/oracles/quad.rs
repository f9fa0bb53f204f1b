use crate::{Error, Result};

/// `∫_a^b f` by tanh-sinh quadrature on `panels` equal sub-intervals.
/// Returns the value and the summed error estimate; fails when the estimate
/// exceeds `tol`.
pub fn integrate_panels(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let per_panel = tol / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * w;
        let out = quadrature::integrate(&f, lo, lo + w, per_panel);
        total += out.integral;
        err += out.error_estimate;
    }
    if !(err <= tol) || !total.is_finite() {
        return Err(Error::Quadrature { achieved: err });
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_and_oscillatory() {
        let (v, _) = integrate_panels(f64::exp, 0.0, 1.0, 1, 1e-13).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        let (v, _) =
            integrate_panels(|x| (20.0 * x).sin(), 0.0, std::f64::consts::PI, 20, 1e-12).unwrap();
        assert!(v.abs() < 1e-12);
    }
}
