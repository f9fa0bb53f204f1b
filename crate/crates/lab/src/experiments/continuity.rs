use ginls_core::dynamics::{make_initial_data, InitialData};
use ginls_core::spectral::{FieldState, Grid};
use ginls_core::zhidkov::dist_dk;
use ginls_core::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{LabError, LabResult};
use crate::simulate::{run_trajectory, sup_distance};
use crate::stats::loglog_slope;

pub const MAX_ABS_SLOPE: f64 = 0.1;
pub const RATIO_RANGE: (f64, f64) = (0.1, 100.0);
pub const REFINE_TOL: f64 = 0.10;

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport {
    pub amplitudes: Vec<f64>,
    /// `d¹_ρ(φ, ψ_ε)`.
    pub initial_distances: Vec<f64>,
    /// `sup_t d¹_ρ(u, v_ε) / d¹_ρ(φ, ψ_ε)`.
    pub ratios: Vec<f64>,
    /// Log-log slope of ratio against `ε`.
    pub slope: f64,
    pub max_ratio: f64,
    pub refined_ratios: Option<Vec<f64>>,
    pub refinement_change: Option<f64>,
    pub passed: bool,
}

/// Unit-size, seeded, smooth perturbation localised mid-box:
/// `e^{-((x-L/2)/w)²}·g(x)` with `g` a normalised random band pattern.
pub fn perturbation(grid: &Grid, seed: u64, width: f64) -> LabResult<Vec<Complex64>> {
    let band = (grid.n() / 3 - 1).min(8);
    let pattern = make_initial_data(
        &InitialData::RandomBand {
            seed,
            band,
            amp: 0.5,
        },
        grid,
        1.0,
    )?;
    let mid = grid.length() / 2.0;
    Ok(grid
        .points()
        .zip(pattern.values())
        .map(|(x, z)| (-((x - mid) / width).powi(2)).exp() * (z - 1.0) / 0.5)
        .collect())
}

fn ratios(cfg: &RunConfig, n: usize) -> LabResult<(Vec<f64>, Vec<f64>)> {
    let grid = Grid::new(n, cfg.grid.length)?;
    let p = cfg.params;
    let phi = make_initial_data(&cfg.initial, &grid, p.rho)?;
    let pert = perturbation(&grid, cfg.run.seed, cfg.experiment.perturbation_width)?;
    let data: Vec<FieldState> = std::iter::once(Ok(phi.clone()))
        .chain(cfg.experiment.amplitudes.iter().map(|&eps| {
            let v = phi
                .values()
                .iter()
                .zip(&pert)
                .map(|(a, b)| a + eps * p.rho * b)
                .collect();
            phi.with_values(v)
        }))
        .collect::<Result<_, _>>()?;
    // common step so that every trajectory shares its record times
    let dt = data
        .iter()
        .map(|f| cfg.dt_for(f))
        .fold(f64::INFINITY, f64::min);
    let runs: Vec<_> = data
        .par_iter()
        .map(|f| run_trajectory(f, cfg.run.horizon, dt, &p, cfg.run.record_every))
        .collect::<LabResult<_>>()?;
    let mut init = Vec::new();
    let mut out = Vec::new();
    for (f, t) in data[1..].iter().zip(&runs[1..]) {
        let d0 = dist_dk(&phi, f, 1)?;
        init.push(d0);
        out.push(sup_distance(&runs[0], t)? / d0);
    }
    Ok((init, out))
}

/// Lipschitz constant of the flow in `d¹_ρ` along a family `ψ = φ + ε·η`.
pub fn experiment_continuous_dependence(
    cfg: &RunConfig,
    pool: &rayon::ThreadPool,
) -> LabResult<ContinuityReport> {
    let a = &cfg.experiment.amplitudes;
    let (lo, hi) = a
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    if a.len() < 4 || hi / lo < 100.0 {
        return Err(LabError::config(
            "experiment.amplitudes: need at least 4 sizes spanning two decades",
        ));
    }
    pool.install(|| {
        let (initial_distances, ratios_base) = ratios(cfg, cfg.grid.n)?;
        let slope = loglog_slope(a, &ratios_base);
        let max_ratio = ratios_base.iter().copied().fold(0.0, f64::max);
        let refined = if cfg.experiment.refine {
            Some(ratios(cfg, 2 * cfg.grid.n)?.1)
        } else {
            None
        };
        let refinement_change = refined.as_ref().map(|r| {
            r.iter()
                .zip(&ratios_base)
                .map(|(b, a)| ((b - a) / a).abs())
                .fold(0.0, f64::max)
        });
        let in_range = ratios_base
            .iter()
            .all(|r| *r >= RATIO_RANGE.0 && *r <= RATIO_RANGE.1);
        let passed = slope.abs() <= MAX_ABS_SLOPE
            && in_range
            && refinement_change.is_none_or(|c| c <= REFINE_TOL);
        Ok(ContinuityReport {
            amplitudes: a.clone(),
            initial_distances,
            ratios: ratios_base,
            slope,
            max_ratio,
            refined_ratios: refined,
            refinement_change,
            passed,
        })
    })
}
