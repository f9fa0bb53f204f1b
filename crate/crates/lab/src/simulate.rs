use std::path::{Path, PathBuf};

use ginls_core::dynamics::{evolve, ModelParams, Trajectory};
use ginls_core::spectral::FieldState;
use ginls_core::zhidkov::dist_dk;
use serde::Serialize;

use crate::config::RunConfig;
use crate::diagnostics::{relative_drift, DiagnosticsRecord};
use crate::error::{LabError, LabResult};
use crate::io::{write_snapshot, TimeSeriesWriter};

/// Evolves and maps an abort to a numerical error.
pub fn run_trajectory(
    f0: &FieldState,
    horizon: f64,
    dt: f64,
    p: &ModelParams,
    record_every: usize,
) -> LabResult<Trajectory> {
    evolve(f0, horizon, dt, p, record_every).map_err(|a| LabError::Numerical(a.to_string()))
}

/// `sup_t d¹_ρ(u(t), v(t))` over matching records.
pub fn sup_distance(a: &Trajectory, b: &Trajectory) -> LabResult<f64> {
    if a.len() != b.len() {
        return Err(LabError::Numerical(format!(
            "trajectories have {} and {} records",
            a.len(),
            b.len()
        )));
    }
    let mut sup = 0.0f64;
    for (u, v) in a.states.iter().zip(&b.states) {
        if (u.time() - v.time()).abs() > 1e-12 * u.time().abs().max(1.0) {
            return Err(LabError::Numerical("record times differ".into()));
        }
        sup = sup.max(dist_dk(u, v, 1)?);
    }
    Ok(sup)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub steps_dt: f64,
    pub records: usize,
    pub final_time: f64,
    pub h1_drift: f64,
    pub h2_inls_drift: Option<f64>,
    pub mass_drift: f64,
    pub max_seam_gap: f64,
    pub csv: PathBuf,
    pub snapshots: Vec<PathBuf>,
    /// Set when the run stopped early; the files hold the partial output.
    pub aborted: Option<String>,
}

pub fn output_dir(cfg: &RunConfig, cli_out: Option<&Path>) -> PathBuf {
    cli_out
        .map(Path::to_path_buf)
        .or_else(|| cfg.run.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Runs the configured flow and writes `timeseries.csv`, the first and last
/// snapshots and `summary.json` under `out`. A step failure still writes the
/// partial output and then returns the numerical error.
pub fn run_simulation(cfg: &RunConfig, out: &Path) -> LabResult<RunSummary> {
    let f0 = cfg.initial_state()?;
    let p = cfg.params;
    let dt = cfg.dt_for(&f0);
    std::fs::create_dir_all(out).map_err(|e| LabError::io(out, e))?;
    let (traj, aborted) = match evolve(&f0, cfg.run.horizon, dt, &p, cfg.run.record_every) {
        Ok(t) => (t, None),
        Err(a) => {
            let msg = a.to_string();
            (a.partial, Some(msg))
        }
    };
    let records = DiagnosticsRecord::series(&traj.states, &p)?;
    let csv = out.join("timeseries.csv");
    let mut w = TimeSeriesWriter::create(&csv, &cfg.echo(), p.is_integrable())?;
    for r in &records {
        w.write(r)?;
    }
    w.finish()?;
    let mut snapshots = Vec::new();
    if cfg.run.snapshots {
        let last = traj.len() - 1;
        for (k, f) in [(0, traj.initial()), (last, traj.last())] {
            let path = out.join(format!("state_{k:05}.snap"));
            write_snapshot(&path, f, &p)?;
            if !snapshots.contains(&path) {
                snapshots.push(path);
            }
        }
    }
    let summary = RunSummary {
        steps_dt: traj.dt,
        records: records.len(),
        final_time: traj.last().time(),
        h1_drift: relative_drift(records.iter().map(|r| r.h1), 1.0),
        h2_inls_drift: p
            .is_integrable()
            .then(|| relative_drift(records.iter().map(|r| r.h2_inls.unwrap_or(f64::NAN)), 1.0)),
        mass_drift: relative_drift(records.iter().map(|r| r.mass), 1.0),
        max_seam_gap: records.iter().map(|r| r.seam_gap).fold(0.0, f64::max),
        csv,
        snapshots,
        aborted: aborted.clone(),
    };
    crate::experiments::write_json(&out.join("summary.json"), &summary)?;
    match aborted {
        Some(msg) => Err(LabError::Numerical(msg)),
        None => Ok(summary),
    }
}
