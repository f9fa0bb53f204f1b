use ginls_core::dynamics::NonlocalOperator;
use ginls_core::spectral::symbol_ldelta;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{LabError, LabResult};
use crate::simulate::{run_trajectory, sup_distance};
use crate::stats::{loglog_slope, strictly_decreasing};

pub const MIN_RATE: f64 = 1.0;

#[derive(Debug, Clone, Serialize)]
pub struct DeepwaterReport {
    pub deltas: Vec<f64>,
    /// `sup_t d¹_ρ(u_δ, u_H)`.
    pub distances: Vec<f64>,
    /// Fitted decay rate in `1/δ` (minus the log-log slope).
    pub rate: f64,
    pub monotone: bool,
    /// `δ · max_ξ r_δ(ξ)` on the grid, at most 1.
    pub operator_sup: Vec<f64>,
    pub passed: bool,
}

/// Compares `T_δ` runs against the Hilbert (`δ = ∞`) run from the same datum.
pub fn experiment_deepwater_limit(
    cfg: &RunConfig,
    pool: &rayon::ThreadPool,
) -> LabResult<DeepwaterReport> {
    let deltas = &cfg.experiment.deltas;
    if deltas.len() < 4 {
        return Err(LabError::config(
            "experiment.deltas: need at least 4 values",
        ));
    }
    let f0 = cfg.initial_state()?;
    let grid = f0.grid().clone();
    let dt = cfg.dt_for(&f0);
    let mut params = vec![cfg.params.with_nonlocal(NonlocalOperator::Hilbert)];
    params.extend(deltas.iter().map(|&d| {
        let mut p = cfg.params.with_nonlocal(NonlocalOperator::Tdelta);
        p.delta = d;
        p
    }));
    pool.install(|| {
        let runs: Vec<_> = params
            .par_iter()
            .map(|p| run_trajectory(&f0, cfg.run.horizon, dt, p, cfg.run.record_every))
            .collect::<LabResult<_>>()?;
        let distances = runs[1..]
            .iter()
            .map(|t| sup_distance(t, &runs[0]))
            .collect::<LabResult<Vec<_>>>()?;
        let operator_sup = deltas
            .iter()
            .map(|&d| {
                Ok(d * symbol_ldelta(&grid, d)?
                    .real_values()
                    .into_iter()
                    .fold(0.0, f64::max))
            })
            .collect::<LabResult<Vec<_>>>()?;
        let rate = -loglog_slope(deltas, &distances);
        let monotone = strictly_decreasing(&distances);
        let passed = monotone && rate >= MIN_RATE && operator_sup.iter().all(|s| *s <= 1.0);
        Ok(DeepwaterReport {
            deltas: deltas.clone(),
            distances,
            rate,
            monotone,
            operator_sup,
            passed,
        })
    })
}
