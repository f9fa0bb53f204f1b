use std::path::Path;

use ginls_core::conserved::{
    apriori_e1_bound, calibrate_gronwall, gronwall_envelope, gronwall_integrand,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::diagnostics::{relative_drift, DiagnosticsRecord};
use crate::error::LabResult;
use crate::io::TimeSeriesWriter;
use crate::simulate::run_trajectory;

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub records: usize,
    pub dt: f64,
    pub drift_tol: f64,
    /// Drifts relative to `max(|q(0)|, 1)`.
    pub h1_drift: f64,
    pub h2_inls_drift: Option<f64>,
    pub mass_drift: f64,
    pub max_e1: f64,
    /// A-priori bound on `E¹_ρ` from `H₁(φ)`; defocusing parameters only.
    pub e1_bound: Option<f64>,
    pub gronwall_c: f64,
    /// `max_t (H₂(t) - envelope(t))`, nonpositive when the envelope holds.
    pub h2_max_excess: f64,
    pub passed: bool,
}

/// Runs the configured flow and checks every monitored conservation law.
/// Writes the time series to `out/timeseries.csv` when `out` is given.
pub fn experiment_conservation_drift(
    cfg: &RunConfig,
    pool: &rayon::ThreadPool,
    out: Option<&Path>,
) -> LabResult<DriftReport> {
    let p = cfg.params;
    let f0 = cfg.initial_state()?;
    let dt = cfg.dt_for(&f0);
    let traj = run_trajectory(&f0, cfg.run.horizon, dt, &p, cfg.run.record_every)?;
    let recs = pool.install(|| DiagnosticsRecord::series(&traj.states, &p))?;
    if let Some(dir) = out {
        let mut w =
            TimeSeriesWriter::create(&dir.join("timeseries.csv"), &cfg.echo(), p.is_integrable())?;
        for r in &recs {
            w.write(r)?;
        }
        w.finish()?;
    }
    let x = &cfg.experiment;
    let h1_drift = relative_drift(recs.iter().map(|r| r.h1), 1.0);
    let h2_inls_drift = p
        .is_integrable()
        .then(|| relative_drift(recs.iter().map(|r| r.h2_inls.unwrap_or(f64::NAN)), 1.0));
    let mass_drift = relative_drift(recs.iter().map(|r| r.mass), 1.0);
    let max_e1 = recs.iter().map(|r| r.e1).fold(0.0, f64::max);
    let e1_bound = if p.is_defocusing() {
        Some(apriori_e1_bound(recs[0].h1.max(0.0), &p, cfg.grid.length)?)
    } else {
        None
    };
    let times: Vec<f64> = recs.iter().map(|r| r.t).collect();
    let g: Vec<f64> = recs
        .iter()
        .map(|r| gronwall_integrand(r.e1, r.dx2norm * r.dx2norm))
        .collect();
    let h2: Vec<f64> = recs.iter().map(|r| r.h2).collect();
    let t_cal = x.calibration_fraction * cfg.run.horizon;
    let c = calibrate_gronwall(&times, &g, &h2, t_cal, x.gronwall_safety)?;
    let (upper, _) = gronwall_envelope(&times, &g, h2[0], c);
    let slack = 1e-9 * h2[0].abs().max(1.0);
    let h2_max_excess = h2
        .iter()
        .zip(&upper)
        .map(|(h, u)| h - u)
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = h1_drift <= x.drift_tol
        && h2_inls_drift.is_none_or(|d| d <= x.drift_tol)
        && mass_drift <= x.drift_tol
        && e1_bound.is_none_or(|b| max_e1 <= b)
        && h2_max_excess <= slack;
    Ok(DriftReport {
        records: recs.len(),
        dt: traj.dt,
        drift_tol: x.drift_tol,
        h1_drift,
        h2_inls_drift,
        mass_drift,
        max_e1,
        e1_bound,
        gronwall_c: c,
        h2_max_excess,
        passed,
    })
}
