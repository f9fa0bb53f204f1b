use ginls_core::conserved::{functional_h1, functional_h2, functional_h2_inls, renormalized_mass};
use ginls_core::dynamics::ModelParams;
use ginls_core::spectral::FieldState;
use ginls_core::zhidkov::{dx_sobolev_norm_sq_spectral, MetricsReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::LabResult;

/// One time slice of the monitored functionals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub h1: f64,
    pub h2: f64,
    pub h2_inls: Option<f64>,
    pub mass: f64,
    pub linf: f64,
    pub seam_gap: f64,
    /// `‖∂x² u‖_{L²}`.
    pub dx2norm: f64,
}

impl DiagnosticsRecord {
    pub fn compute(f: &FieldState, p: &ModelParams) -> LabResult<Self> {
        let m = MetricsReport::compute(f, 2)?;
        let g = f.grid();
        // ‖∂²u‖² = Σ ξ⁴|û|² = ‖∂u‖²_{H¹} - ‖∂u‖²
        let spec = g.forward(f.values());
        let dxx = (dx_sobolev_norm_sq_spectral(g, &spec, 1.0)
            - dx_sobolev_norm_sq_spectral(g, &spec, 0.0))
        .max(0.0)
        .sqrt();
        Ok(DiagnosticsRecord {
            t: f.time(),
            e1: m.e1,
            e2: m.e2,
            h1: functional_h1(f, p)?,
            h2: functional_h2(f, p)?,
            h2_inls: if p.is_integrable() {
                Some(functional_h2_inls(f, p)?)
            } else {
                None
            },
            mass: renormalized_mass(f),
            linf: m.linf,
            seam_gap: m.seam_gap,
            dx2norm: dxx,
        })
    }

    /// Computes a record per state in parallel; output order follows input.
    pub fn series(states: &[FieldState], p: &ModelParams) -> LabResult<Vec<Self>> {
        states.par_iter().map(|f| Self::compute(f, p)).collect()
    }
}

/// `max_t |q(t) - q(0)| / max(|q(0)|, floor)`.
pub fn relative_drift(values: impl IntoIterator<Item = f64>, floor: f64) -> f64 {
    let mut it = values.into_iter();
    let Some(first) = it.next() else {
        return 0.0;
    };
    let scale = first.abs().max(floor);
    it.map(|v| (v - first).abs()).fold(0.0, f64::max) / scale
}

#[cfg(test)]
mod tests {
    use ginls_core::spectral::Grid;
    use ginls_core::Complex64;

    use super::*;

    #[test]
    fn plane_wave_record() {
        let g = Grid::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let f = FieldState::from_fn(g, 1.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let p = ModelParams::inls(1.0, 1.0).unwrap();
        let r = DiagnosticsRecord::compute(&f, &p).unwrap();
        let l = 2.0 * std::f64::consts::PI;
        assert!((r.h1 - 4.0 * l).abs() < 1e-11);
        assert!((r.dx2norm - (16.0 * l).sqrt()).abs() < 1e-11);
        assert!(r.h2_inls.is_some() && r.mass.abs() < 1e-12);
        let q =
            DiagnosticsRecord::compute(&f, &ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap()).unwrap();
        assert!(q.h2_inls.is_none());
    }

    #[test]
    fn drift_definition() {
        assert_eq!(relative_drift([2.0, 2.5, 1.0], 1e-300), 0.5);
        assert_eq!(relative_drift([0.0, 1e-13], 1.0), 1e-13);
        assert_eq!(relative_drift(std::iter::empty(), 1.0), 0.0);
    }
}
