use ginls_core::dynamics::make_initial_data;
use ginls_core::spectral::{symbol_lp, Grid, LpKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{LabError, LabResult};
use crate::simulate::{run_trajectory, sup_distance};
use crate::stats::{log2_slope, strictly_decreasing};

/// Slope bound: at least the `2^{-ℓ/2}` decay of the difference estimate.
pub const MAX_SLOPE: f64 = -0.5;
/// Allowed relative change of the slope under grid doubling.
pub const REFINE_TOL: f64 = 0.10;

#[derive(Debug, Clone, Serialize)]
pub struct LevelSweep {
    pub n: usize,
    pub dt: f64,
    /// Levels compared against the reference (the largest configured level).
    pub levels: Vec<u32>,
    /// `sup_t d¹_ρ(u^(ℓ), u^(ℓ_max))`.
    pub distances: Vec<f64>,
    /// Fitted slope of `log₂` distance per level; `None` when every
    /// distance is at the stepping floor.
    pub slope: Option<f64>,
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MollifiedReport {
    pub reference_level: u32,
    pub base: LevelSweep,
    pub refined: Option<LevelSweep>,
    pub slope_change: Option<f64>,
    pub passed: bool,
}

const FLOOR: f64 = 1e-12;

fn sweep(cfg: &RunConfig, n: usize) -> LabResult<LevelSweep> {
    let grid = Grid::new(n, cfg.grid.length)?;
    let phi = make_initial_data(&cfg.initial, &grid, cfg.params.rho)?;
    let dt = cfg.dt_for(&phi);
    let levels = &cfg.experiment.levels;
    let runs: Vec<_> = levels
        .par_iter()
        .map(|&l| {
            let f0 = symbol_lp(&grid, l, LpKind::AtMost).apply(&phi)?;
            let p = cfg.params.with_moll_level(Some(l));
            run_trajectory(&f0, cfg.run.horizon, dt, &p, cfg.run.record_every)
        })
        .collect::<LabResult<_>>()?;
    let (reference, rest) = runs.split_last().expect("levels validated non-empty");
    let distances = rest
        .iter()
        .map(|t| sup_distance(t, reference))
        .collect::<LabResult<Vec<_>>>()?;
    let fit_levels: Vec<u32> = levels[..levels.len() - 1].to_vec();
    let x: Vec<f64> = fit_levels.iter().map(|&l| l as f64).collect();
    let degenerate = distances.iter().all(|d| *d <= FLOOR);
    Ok(LevelSweep {
        n,
        dt,
        monotone: degenerate || strictly_decreasing(&distances),
        slope: (!degenerate).then(|| log2_slope(&x, &distances)),
        levels: fit_levels,
        distances,
    })
}

/// Evolves `u^(ℓ)` from `P_{≤ℓ}φ` for every configured level and fits the
/// decay of the distance to the finest level.
pub fn experiment_mollified_convergence(
    cfg: &RunConfig,
    pool: &rayon::ThreadPool,
) -> LabResult<MollifiedReport> {
    let levels = &cfg.experiment.levels;
    if levels.len() < 4 {
        return Err(LabError::config(format!(
            "experiment.levels: need at least 4 levels, got {}",
            levels.len()
        )));
    }
    pool.install(|| {
        let base = sweep(cfg, cfg.grid.n)?;
        let refined = if cfg.experiment.refine {
            Some(sweep(cfg, 2 * cfg.grid.n)?)
        } else {
            None
        };
        let slope_change = match (&base.slope, refined.as_ref().and_then(|r| r.slope)) {
            (Some(a), Some(b)) => Some(((b - a) / a).abs()),
            _ => None,
        };
        let passed = match base.slope {
            None => true,
            Some(s) => s <= MAX_SLOPE && slope_change.is_none_or(|c| c <= REFINE_TOL),
        };
        Ok(MollifiedReport {
            reference_level: *levels.last().expect("non-empty"),
            base,
            refined,
            slope_change,
            passed,
        })
    })
}
