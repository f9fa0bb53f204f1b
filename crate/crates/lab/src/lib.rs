//! Configuration, persistence and experiments on top of `ginls-core`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod simulate;
pub mod stats;

pub use config::RunConfig;
pub use error::{LabError, LabResult};
