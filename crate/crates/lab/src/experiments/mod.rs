//! The four headline experiments. Each fans independent trajectories out
//! to a worker pool; results come back in input order, so reports are
//! deterministic regardless of the pool size.

mod continuity;
mod deepwater;
mod drift;
mod mollified;

use std::path::Path;

use serde::Serialize;

pub use continuity::{experiment_continuous_dependence, ContinuityReport};
pub use deepwater::{experiment_deepwater_limit, DeepwaterReport};
pub use drift::{experiment_conservation_drift, DriftReport};
pub use mollified::{experiment_mollified_convergence, LevelSweep, MollifiedReport};

use crate::error::{LabError, LabResult};

/// A pool with `workers` threads; 0 picks the rayon default.
pub fn worker_pool(workers: usize) -> LabResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::config(format!("workers: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serialises");
    std::fs::write(path, text + "\n").map_err(|e| LabError::io(path, e))
}
