//! Cross-pipeline comparisons of `T_δ`: kernel quadrature against the line
//! Fourier multiplier, and the grid multiplier against kernel quadrature.

use num_complex::Complex64;

use super::kernel::{
    kernel_hilbert_pv, kernel_tdelta_pv, line_multiplier_tdelta, LineSampledFunction,
};
use crate::spectral::{symbol_tdelta_dx, Grid};
use crate::{Error, Result};

/// A smooth, rapidly decaying test function with its derivative.
#[derive(Clone, Copy)]
pub struct CorpusFunction {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub df: fn(f64) -> f64,
}

fn sech2(x: f64) -> f64 {
    1.0 / x.cosh().powi(2)
}

/// Gaussians and bumps used as the operator ground-truth corpus.
pub fn operator_corpus() -> Vec<CorpusFunction> {
    vec![
        CorpusFunction {
            name: "gaussian",
            f: |x| (-x * x).exp(),
            df: |x| -2.0 * x * (-x * x).exp(),
        },
        CorpusFunction {
            name: "shifted_gaussian",
            f: |x| (-2.0 * (x - 0.5).powi(2)).exp(),
            df: |x| -4.0 * (x - 0.5) * (-2.0 * (x - 0.5).powi(2)).exp(),
        },
        CorpusFunction {
            name: "odd_gaussian",
            f: |x| x * (-x * x).exp(),
            df: |x| (1.0 - 2.0 * x * x) * (-x * x).exp(),
        },
        CorpusFunction {
            name: "sech2_bump",
            f: sech2,
            df: |x| -2.0 * x.tanh() * sech2(x),
        },
    ]
}

/// Evaluation points `x ∈ [-2, 2]` on the lattice of spacing `h`.
fn probe_points(h: f64) -> Vec<f64> {
    let m = (2.0 / h).floor() as i64;
    (-m..=m).map(|j| j as f64 * h).collect()
}

fn max_rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

fn sample(radius: f64, m: usize, g: fn(f64) -> f64) -> Result<LineSampledFunction> {
    LineSampledFunction::from_fn(radius, m, |x| Complex64::new(g(x), 0.0))
}

/// Max relative disagreement on `|x| ≤ 2` between kernel quadrature and the
/// line multiplier for `T_δ f`.
pub fn kernel_vs_line(entry: &CorpusFunction, delta: f64) -> Result<f64> {
    let f = sample(20.0, 1000, entry.f)?;
    let xs = probe_points(f.spacing() * 10.0);
    let k = kernel_tdelta_pv(&f, delta, &xs)?;
    let l = line_multiplier_tdelta(&f, delta, &xs)?;
    Ok(max_rel_diff(&k, &l))
}

/// Grid multiplier `T_δ∂x` against kernel quadrature of `T_δ f'` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLineReport {
    /// Max relative disagreement on `|x| ≤ 2`.
    pub raw: f64,
    /// The same after adding back the zero mode dropped by the grid symbol.
    pub corrected: f64,
    /// `(∫f)/(δL)`: the line symbol tends to `1/δ` at `ξ = 0` where the
    /// grid symbol is 0, so by Poisson summation the periodic result is the
    /// line result shifted by this constant plus the (exponentially small)
    /// tails of the periodic images.
    pub zero_mode_offset: f64,
}

/// Places `f` in the middle of a box of length `length` with `n` points and
/// compares on the shared lattice.
pub fn grid_vs_line(
    entry: &CorpusFunction,
    delta: f64,
    n: usize,
    length: f64,
) -> Result<GridLineReport> {
    let grid = Grid::new(n, length)?;
    let h = grid.dx();
    let mid = length / 2.0;
    let values: Vec<Complex64> = grid
        .points()
        .map(|x| Complex64::new((entry.f)(x - mid), 0.0))
        .collect();
    let out = symbol_tdelta_dx(&grid, delta)?.apply_values(&values);
    let radius_steps = (mid.min(20.0) / h).floor() as usize;
    let df = sample(radius_steps as f64 * h, radius_steps, entry.df)?;
    let xs = probe_points(h);
    let line = kernel_tdelta_pv(&df, delta, &xs)?;
    let on_grid: Vec<Complex64> = xs
        .iter()
        .map(|x| out[((x + mid) / h).round() as usize])
        .collect();
    let offset = grid.integrate(values.iter().map(|z| z.re)) / (delta * length);
    let shifted: Vec<Complex64> = on_grid.iter().map(|z| z + offset).collect();
    Ok(GridLineReport {
        raw: max_rel_diff(&on_grid, &line),
        corrected: max_rel_diff(&shifted, &line),
        zero_mode_offset: offset,
    })
}

/// `max_{|x|≤2} |T_δ f − H f|` by kernel quadrature, per `δ`.
pub fn deepwater_gap(entry: &CorpusFunction, deltas: &[f64]) -> Result<Vec<f64>> {
    let f = sample(20.0, 1000, entry.f)?;
    let xs = probe_points(f.spacing() * 10.0);
    let h = kernel_hilbert_pv(&f, &xs)?;
    deltas
        .iter()
        .map(|&d| {
            if !(d > 0.0) {
                return Err(Error::invalid("delta", "must be positive"));
            }
            let t = kernel_tdelta_pv(&f, d, &xs)?;
            Ok(t.iter()
                .zip(&h)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max))
        })
        .collect()
}
