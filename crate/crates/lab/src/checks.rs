//! The oracle suite behind `ginls check-operators`: each line compares a
//! spectral quantity against an independent quadrature.

use ginls_core::oracles::{
    coth_fourier_check, grid_vs_line, hyperbolic_identity_suite, kernel_vs_line, operator_corpus,
    tanh_fourier_check,
};
use ginls_core::spectral::{symbol_ldelta, Grid};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::LabResult;

pub const DELTAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const KERNEL_LINE_TOL: f64 = 1e-6;
pub const GRID_LINE_TOL: f64 = 1e-4;
pub const FOURIER_TOL: f64 = 1e-4;
pub const IDENTITY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckLine {
    fn new(name: String, value: f64, tol: f64) -> Self {
        CheckLine {
            name,
            value,
            tol,
            passed: value <= tol,
        }
    }
}

/// Kernel vs line multiplier and grid multiplier vs kernel, per corpus entry and `δ`.
pub fn operator_ground_truth() -> LabResult<Vec<CheckLine>> {
    let cases: Vec<_> = operator_corpus()
        .into_iter()
        .flat_map(|e| DELTAS.map(|d| (e, d)))
        .collect();
    let lines: Vec<Vec<CheckLine>> = cases
        .par_iter()
        .map(|(e, d)| {
            let k = kernel_vs_line(e, *d)?;
            let g = grid_vs_line(e, *d, 2048, 160.0)?;
            Ok(vec![
                CheckLine::new(
                    format!("kernel_vs_line {} delta={d}", e.name),
                    k,
                    KERNEL_LINE_TOL,
                ),
                CheckLine::new(
                    format!("grid_vs_line {} delta={d}", e.name),
                    g.corrected,
                    GRID_LINE_TOL,
                ),
            ])
        })
        .collect::<ginls_core::Result<_>>()?;
    Ok(lines.into_iter().flatten().collect())
}

/// Fourier transforms of `tanh(x/2)` and `coth(x/2)` at `ξ ∈ {1/2, 1, 2}`,
/// and the hyperbolic identities on a log grid of `|x| ∈ [1e-3, 30]`.
pub fn hyperbolic_checks() -> LabResult<Vec<CheckLine>> {
    let mut out = Vec::new();
    for xi in [0.5, 1.0, 2.0] {
        out.push(CheckLine::new(
            format!("tanh_fourier xi={xi}"),
            tanh_fourier_check(xi)?.abs_error(),
            FOURIER_TOL,
        ));
        out.push(CheckLine::new(
            format!("coth_fourier xi={xi}"),
            coth_fourier_check(xi)?.abs_error(),
            FOURIER_TOL,
        ));
    }
    let (lo, hi) = (1e-3f64.ln(), 30f64.ln());
    let mut worst = 0.0f64;
    for j in 0..=2000 {
        let x = (lo + (hi - lo) * j as f64 / 2000.0).exp();
        for s in [x, -x] {
            worst = worst.max(
                hyperbolic_identity_suite(s)?
                    .into_iter()
                    .fold(0.0, f64::max),
            );
        }
    }
    out.push(CheckLine::new(
        "hyperbolic_identities".into(),
        worst,
        IDENTITY_TOL,
    ));
    Ok(out)
}

/// `δ·max r_δ ≤ 1` on a range of grids.
pub fn symbol_bound_checks() -> LabResult<Vec<CheckLine>> {
    let mut out = Vec::new();
    for (n, l) in [(64, std::f64::consts::TAU), (256, 50.0), (1024, 400.0)] {
        let g = Grid::new(n, l)?;
        let worst = DELTAS
            .iter()
            .chain(&[8.0, 16.0])
            .map(|&d| {
                Ok(d * symbol_ldelta(&g, d)?
                    .real_values()
                    .into_iter()
                    .fold(0.0, f64::max))
            })
            .collect::<LabResult<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(CheckLine::new(
            format!("ldelta_bound n={n} L={l}"),
            worst,
            1.0,
        ));
    }
    Ok(out)
}

pub fn operator_suite() -> LabResult<Vec<CheckLine>> {
    let mut out = operator_ground_truth()?;
    out.extend(hyperbolic_checks()?);
    out.extend(symbol_bound_checks()?);
    Ok(out)
}
