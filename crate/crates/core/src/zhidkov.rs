//! Discrete Zhidkov-space functionals.
//!
//! Sobolev norms use the inhomogeneous weight `(1+ξ²)^s` with the
//! Plancherel-exact normalisation of [`Grid::sobolev_norm_sq`]; `L∞` is the
//! grid maximum.

use num_complex::Complex64;

use crate::spectral::{lp_block_value, lp_top_level, FieldState, Grid};
use crate::{Error, Result};

/// Fraction of the box (split evenly between both ends) treated as the seam.
pub const SEAM_FRACTION: f64 = 0.10;
pub const DEFAULT_SEAM_TOL: f64 = 1e-6;
pub const DEFAULT_ENVELOPE_EPS: f64 = 0.5;

/// `‖∂x g‖²_{H^m}` from a spectrum; the Nyquist mode is dropped (it is
/// annihilated by the odd derivative).
pub fn dx_sobolev_norm_sq_spectral(grid: &Grid, spectrum: &[Complex64], m: f64) -> f64 {
    let nyq = grid.nyquist_index();
    let scale = grid.length() / (grid.n() as f64).powi(2);
    let sum: f64 = spectrum
        .iter()
        .zip(grid.wavenumbers())
        .enumerate()
        .filter(|(k, _)| *k != nyq)
        .map(|(_, (z, &xi))| (1.0 + xi * xi).powf(m) * xi * xi * z.norm_sqr())
        .sum();
    scale * sum
}

pub fn dx_sobolev_norm_sq(grid: &Grid, values: &[Complex64], m: f64) -> f64 {
    dx_sobolev_norm_sq_spectral(grid, &grid.forward(values), m)
}

pub fn linf(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖|f|² - ρ²‖_{L²}`.
pub fn sq_dev(f: &FieldState) -> f64 {
    let rho2 = f.rho() * f.rho();
    let g = f.grid();
    g.integrate(f.values().iter().map(|z| (z.norm_sqr() - rho2).powi(2)))
        .sqrt()
}

fn check_order(k: u32) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::invalid("k", "order must be at least 1"))
    }
}

/// `E^k_ρ(f) = ‖∂x f‖²_{H^{k-1}} + ‖f‖²_{L∞} + ‖|f|² - ρ²‖_{L²}`.
pub fn energy_ek(f: &FieldState, k: u32) -> Result<f64> {
    check_order(k)?;
    let g = f.grid();
    let sob = dx_sobolev_norm_sq(g, f.values(), (k - 1) as f64);
    let m = linf(f.values());
    Ok(sob + m * m + sq_dev(f))
}

/// `d^k_ρ(f, g) = ‖∂x(f-g)‖_{H^{k-1}} + ‖f-g‖_{L∞} + ‖|f|² - |g|²‖_{L²}`.
pub fn dist_dk(f: &FieldState, other: &FieldState, k: u32) -> Result<f64> {
    check_order(k)?;
    f.check_compatible(other)?;
    let grid = f.grid();
    let diff: Vec<Complex64> = f
        .values()
        .iter()
        .zip(other.values())
        .map(|(a, b)| a - b)
        .collect();
    let sob = dx_sobolev_norm_sq(grid, &diff, (k - 1) as f64).sqrt();
    let sq = grid
        .integrate(
            f.values()
                .iter()
                .zip(other.values())
                .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).powi(2)),
        )
        .sqrt();
    Ok(sob + linf(&diff) + sq)
}

/// Indices of the seam region: the outer [`SEAM_FRACTION`] of the box.
pub fn seam_indices(grid: &Grid) -> impl Iterator<Item = usize> + '_ {
    let width = grid.length() * SEAM_FRACTION / 2.0;
    let l = grid.length();
    (0..grid.n()).filter(move |&j| {
        let x = grid.x(j);
        x < width || x >= l - width
    })
}

/// `max ||f| - ρ|` over the seam region.
pub fn seam_gap(f: &FieldState) -> f64 {
    seam_indices(f.grid())
        .map(|j| (f.values()[j].norm() - f.rho()).abs())
        .fold(0.0, f64::max)
}

pub fn seam_check(f: &FieldState, tol: f64) -> bool {
    seam_gap(f) <= tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub e1: f64,
    pub e2: f64,
    pub ek: f64,
    pub k: u32,
    pub linf: f64,
    pub sq_dev: f64,
    pub seam_gap: f64,
}

impl MetricsReport {
    pub fn compute(f: &FieldState, k: u32) -> Result<Self> {
        check_order(k)?;
        let g = f.grid();
        let spec = g.forward(f.values());
        let m = linf(f.values());
        let sd = sq_dev(f);
        let base = m * m + sd;
        let ek_of = |order: u32| dx_sobolev_norm_sq_spectral(g, &spec, (order - 1) as f64) + base;
        Ok(MetricsReport {
            e1: ek_of(1),
            e2: ek_of(2),
            ek: ek_of(k),
            k,
            linf: m,
            sq_dev: sd,
            seam_gap: seam_gap(f),
        })
    }
}

/// Dyadic frequency envelope `c_j[f]`, `j = 0..=J_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSequence {
    pub eps: f64,
    pub values: Vec<f64>,
    /// `‖P_j ∂x f‖_{H¹}` per block, the quantity the envelope majorises.
    pub block_norms: Vec<f64>,
}

impl EnvelopeSequence {
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|c| c * c).sum()
    }

    pub fn top_level(&self) -> u32 {
        (self.values.len() - 1) as u32
    }
}

/// `‖P_j ∂x f‖_{H¹}` for `j = 0..=J_max`, with `J_max` the first level whose
/// `P_{≤J}` is the identity on the grid.
pub fn block_norms(f: &FieldState) -> Vec<f64> {
    let g = f.grid();
    let spec = g.forward(f.values());
    let nyq = g.nyquist_index();
    let scale = g.length() / (g.n() as f64).powi(2);
    (0..=lp_top_level(g))
        .map(|j| {
            let s: f64 = spec
                .iter()
                .zip(g.wavenumbers())
                .enumerate()
                .filter(|(k, _)| *k != nyq)
                .map(|(_, (z, &xi))| {
                    let w = lp_block_value(xi, j);
                    (1.0 + xi * xi) * xi * xi * w * w * z.norm_sqr()
                })
                .sum();
            (scale * s).sqrt()
        })
        .collect()
}

/// `c_j[f] = Σ_k 2^{-ε|j-k|} ‖P_k ∂x f‖_{H¹} + 2^{-εj}(‖f‖_{L∞} + ‖|f|²-ρ²‖^{1/2}_{L²})`.
pub fn freq_envelope(f: &FieldState, eps: f64) -> Result<EnvelopeSequence> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(
            "eps",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    let blocks = block_norms(f);
    let tail = linf(f.values()) + sq_dev(f).sqrt();
    let values = (0..blocks.len())
        .map(|j| {
            let sum: f64 = blocks
                .iter()
                .enumerate()
                .map(|(k, a)| 2f64.powf(-eps * (j as f64 - k as f64).abs()) * a)
                .sum();
            sum + 2f64.powf(-eps * j as f64) * tail
        })
        .collect();
    Ok(EnvelopeSequence {
        eps,
        values,
        block_norms: blocks,
    })
}
