use serde::{Deserialize, Serialize};

use super::local::{Local, Ops};
use crate::dynamics::ModelParams;
use crate::spectral::FieldState;
use crate::{Error, Result};

fn check(f: &FieldState, p: &ModelParams) -> Result<()> {
    p.validate()?;
    if f.rho() != p.rho {
        return Err(Error::RhoMismatch(f.rho(), p.rho));
    }
    Ok(())
}

fn h1_with(ops: &Ops, l: &Local, p: &ModelParams) -> f64 {
    let rho2 = p.rho * p.rho;
    let (a, b) = (p.alpha, p.beta);
    let w: Vec<f64> = l.s.iter().map(|s| s - rho2).collect();
    ops.integrate((0..w.len()).map(|j| {
        l.ux2[j]
            + a * w[j] * l.q[j]
            + 0.5 * b * w[j] * l.ts[j]
            + a * a * (l.s[j] / 3.0 + rho2 / 6.0) * w[j] * w[j]
    }))
}

fn h2_density(ops: &Ops, l: &Local, p: &ModelParams) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    let tq = ops.t(&l.q);
    (0..l.s.len())
        .map(|j| {
            l.uxx[j].norm_sqr()
                + a * (2.0 * l.ux2[j] - 3.0 * l.sxx[j]) * l.q[j]
                + b * (2.0 * l.ux2[j] - 0.75 * l.sxx[j]) * l.ts[j]
                + b * l.q[j] * tq[j]
        })
        .collect()
}

/// `H₁`, conserved for every `α, β`.
pub fn functional_h1(f: &FieldState, p: &ModelParams) -> Result<f64> {
    check(f, p)?;
    let ops = Ops::new(f.grid(), p)?;
    Ok(h1_with(&ops, &Local::new(&ops, f), p))
}

/// `H₂`, the second modified energy (not conserved in general).
pub fn functional_h2(f: &FieldState, p: &ModelParams) -> Result<f64> {
    check(f, p)?;
    let ops = Ops::new(f.grid(), p)?;
    let l = Local::new(&ops, f);
    Ok(ops.integrate(h2_density(&ops, &l, p)))
}

fn h2_inls_with(ops: &Ops, l: &Local, p: &ModelParams) -> f64 {
    let rho2 = p.rho * p.rho;
    let (rho4, rho6) = (rho2 * rho2, rho2 * rho2 * rho2);
    let (a, b) = (p.alpha, p.beta);
    let a2 = a * a;
    let s2: Vec<f64> = l.s.iter().map(|s| s * s).collect();
    let ts2 = ops.t(&s2);
    let base = h2_density(ops, l, p);
    ops.integrate((0..l.s.len()).map(|j| {
        let (s, q, ts) = (l.s[j], l.q[j], l.ts[j]);
        let w = s - rho2;
        base[j]
            + 2.0 * a2 * s * s * l.ux2[j]
            + a2 * s * (1.5 * l.sx[j] * l.sx[j] + 0.5 * ts * ts)
            + a * b * q * (2.0 * s * ts + ts2[j])
            + a2 * (s * s * s - rho6) * (a * q + 2.0 / 3.0 * b * ts)
            + 0.25 * a2 * b * (s2[j] - rho4) * ts2[j]
            + a2 * a2 * (s * s * s / 5.0 + 0.4 * rho2 * s * s + 0.6 * rho4 * s + 0.3 * rho6) * w * w
    }))
}

/// `H₂^INLS`, conserved when `β = ±|α| ≠ 0`.
pub fn functional_h2_inls(f: &FieldState, p: &ModelParams) -> Result<f64> {
    check(f, p)?;
    if !p.is_integrable() {
        return Err(Error::NotIntegrable {
            alpha: p.alpha,
            beta: p.beta,
        });
    }
    let ops = Ops::new(f.grid(), p)?;
    Ok(h2_inls_with(&ops, &Local::new(&ops, f), p))
}

/// `∫(|f|² - ρ²) dx`.
pub fn renormalized_mass(f: &FieldState) -> f64 {
    let rho2 = f.rho() * f.rho();
    f.grid()
        .integrate(f.values().iter().map(|z| z.norm_sqr() - rho2))
}

fn correctors_1_with(ops: &Ops, l: &Local, rho: f64) -> [f64; 4] {
    let rho2 = rho * rho;
    let w: Vec<f64> = l.s.iter().map(|s| s - rho2).collect();
    [
        ops.integrate(w.iter().zip(&l.q).map(|(w, q)| w * q)),
        ops.integrate(w.iter().zip(&l.ts).map(|(w, t)| w * t)),
        ops.integrate(w.iter().map(|w| w * w * w)),
        ops.integrate(w.iter().map(|w| w * w)),
    ]
}

fn correctors_2_with(ops: &Ops, l: &Local) -> [f64; 5] {
    let tq = ops.t(&l.q);
    let n = l.s.len();
    [
        ops.integrate((0..n).map(|j| l.ux2[j] * l.q[j])),
        ops.integrate((0..n).map(|j| l.sxx[j] * l.q[j])),
        ops.integrate((0..n).map(|j| l.ux2[j] * l.ts[j])),
        ops.integrate((0..n).map(|j| l.sxx[j] * l.ts[j])),
        ops.integrate((0..n).map(|j| l.q[j] * tq[j])),
    ]
}

/// `I₁⁽¹⁾…I₁⁽⁴⁾`: `∫(s-ρ²)q`, `∫(s-ρ²)T∂(s-ρ²)`, `∫(s-ρ²)³`, `∫(s-ρ²)²`.
pub fn correctors_1(f: &FieldState, p: &ModelParams) -> Result<[f64; 4]> {
    check(f, p)?;
    let ops = Ops::new(f.grid(), p)?;
    Ok(correctors_1_with(&ops, &Local::new(&ops, f), p.rho))
}

/// `I₂⁽¹⁾…I₂⁽⁵⁾`: `∫|u_x|²q`, `∫s_xx q`, `∫|u_x|²T∂s`, `∫s_xx T∂s`, `∫q T∂q`.
pub fn correctors_2(f: &FieldState, p: &ModelParams) -> Result<[f64; 5]> {
    check(f, p)?;
    let ops = Ops::new(f.grid(), p)?;
    Ok(correctors_2_with(&ops, &Local::new(&ops, f)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HierarchyLevel {
    Zero,
    Half,
    One,
    ThreeHalves,
    Two,
}

impl HierarchyLevel {
    pub const ALL: [HierarchyLevel; 5] = [
        HierarchyLevel::Zero,
        HierarchyLevel::Half,
        HierarchyLevel::One,
        HierarchyLevel::ThreeHalves,
        HierarchyLevel::Two,
    ];
}

fn hierarchy_with(ops: &Ops, l: &Local, n: HierarchyLevel) -> f64 {
    let len = l.s.len();
    match n {
        HierarchyLevel::Zero => ops.integrate(l.s.iter().copied()),
        HierarchyLevel::Half => ops.integrate((0..len).map(|j| l.q[j] + 0.5 * l.s[j] * l.s[j])),
        HierarchyLevel::One => ops.integrate((0..len).map(|j| {
            let s = l.s[j];
            l.ux2[j] + s * l.q[j] + 0.5 * s * l.ts[j] + s * s * s / 3.0
        })),
        HierarchyLevel::ThreeHalves => ops.integrate((0..len).map(|j| {
            let s = l.s[j];
            (l.ux[j].conj() * l.uxx[j]).im
                + 0.5 * l.sx[j] * l.sx[j]
                + 1.5 * s * l.ux2[j]
                + 1.5 * l.q[j] * l.ts[j]
                + s * s * (l.q[j] + 0.75 * l.ts[j])
                + 0.25 * s.powi(4)
        })),
        HierarchyLevel::Two => {
            let tq = ops.t(&l.q);
            let s2: Vec<f64> = l.s.iter().map(|s| s * s).collect();
            let ts2 = ops.t(&s2);
            ops.integrate((0..len).map(|j| {
                let (s, q, ts) = (l.s[j], l.q[j], l.ts[j]);
                l.uxx[j].norm_sqr()
                    + (2.0 * l.ux2[j] - 3.0 * l.sxx[j]) * q
                    + (2.0 * l.ux2[j] - 0.75 * l.sxx[j]) * ts
                    + q * tq[j]
                    + 2.0 * s * s * l.ux2[j]
                    + s * (1.5 * l.sx[j] * l.sx[j] + 0.5 * ts * ts)
                    + q * (2.0 * s * ts + ts2[j])
                    + s * s * s * (q + 2.0 / 3.0 * ts)
                    + 0.25 * s2[j] * ts2[j]
                    + s.powi(5) / 5.0
            }))
        }
    }
}

/// The integrable hierarchy `E_{n/2}` evaluated verbatim on the box
/// (diagnostic only; `T∂` is the grid multiplier).
pub fn hierarchy_e(f: &FieldState, p: &ModelParams, n: HierarchyLevel) -> Result<f64> {
    p.validate()?;
    let ops = Ops::new(f.grid(), p)?;
    Ok(hierarchy_with(&ops, &Local::new(&ops, f), n))
}

/// All functionals of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub h1: f64,
    pub h2: f64,
    pub h2_inls: Option<f64>,
    pub mass_renorm: f64,
    pub correctors1: [f64; 4],
    pub correctors2: [f64; 5],
    /// `E₀, E_{1/2}, E₁, E_{3/2}, E₂`.
    pub hierarchy: [f64; 5],
}

impl FunctionalReport {
    pub fn compute(f: &FieldState, p: &ModelParams) -> Result<Self> {
        check(f, p)?;
        let ops = Ops::new(f.grid(), p)?;
        let l = Local::new(&ops, f);
        let hierarchy = HierarchyLevel::ALL.map(|n| hierarchy_with(&ops, &l, n));
        let report = FunctionalReport {
            h1: h1_with(&ops, &l, p),
            h2: ops.integrate(h2_density(&ops, &l, p)),
            h2_inls: p.is_integrable().then(|| h2_inls_with(&ops, &l, p)),
            mass_renorm: renormalized_mass(f),
            correctors1: correctors_1_with(&ops, &l, p.rho),
            correctors2: correctors_2_with(&ops, &l),
            hierarchy,
        };
        let finite = [report.h1, report.h2, report.mass_renorm]
            .iter()
            .chain(report.h2_inls.iter())
            .chain(&report.correctors1)
            .chain(&report.correctors2)
            .chain(&report.hierarchy)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite { time: f.time() });
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::dynamics::{make_initial_data, InitialData};
    use crate::spectral::Grid;

    fn grid() -> Grid {
        Grid::new(128, 2.0 * PI).unwrap()
    }

    fn generic(g: Grid, rho: f64) -> FieldState {
        FieldState::from_fn(g, rho, |x| {
            rho * Complex64::new(
                1.0 + 0.2 * x.cos() + 0.05 * (3.0 * x).sin(),
                0.1 * (2.0 * x).sin(),
            )
        })
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn constant_state_zero() {
        for rho in [0.5, 1.0, 1.7] {
            let p = ModelParams::new(1.3, 1.3, 0.7, rho).unwrap();
            let f = FieldState::constant(grid(), rho).unwrap();
            let r = FunctionalReport::compute(&f, &p).unwrap();
            assert!(r.h1.abs() < 1e-12 && r.h2.abs() < 1e-12 && r.h2_inls.unwrap().abs() < 1e-11);
            assert!(r.mass_renorm.abs() < 1e-12);
            let l = 2.0 * PI;
            assert!(close(r.hierarchy[0], rho * rho * l, 1e-13));
            assert!(close(r.hierarchy[2], rho.powi(6) * l / 3.0, 1e-13));
        }
    }

    #[test]
    fn plane_wave_closed_forms() {
        let l = 2.0 * PI;
        for &(k, rho) in &[(1.0, 1.0), (2.0, 0.8), (-3.0, 1.2)] {
            let p = ModelParams::inls(1.0, rho).unwrap();
            let f =
                FieldState::from_fn(grid(), rho, |x| Complex64::from_polar(rho, k * x)).unwrap();
            let r = FunctionalReport::compute(&f, &p).unwrap();
            let (r2, r4, r6) = (rho * rho, rho.powi(4), rho.powi(6));
            assert!(close(r.h1, r2 * k * k * l, 1e-12));
            // only |u_xx|² and 2α|u_x|²q survive in H₂
            assert!(close(
                r.h2,
                r2 * k.powi(4) * l + 2.0 * r4 * k.powi(3) * l,
                1e-12
            ));
            let inls = r2 * k.powi(4) * l + 2.0 * r4 * k.powi(3) * l + 2.0 * r6 * k * k * l;
            assert!(
                close(r.h2_inls.unwrap(), inls, 1e-12),
                "{} vs {inls}",
                r.h2_inls.unwrap()
            );
            assert!(close(r.hierarchy[1], r2 * k * l + r4 * l / 2.0, 1e-12));
            assert!(r.mass_renorm.abs() < 1e-12);
        }
    }

    #[test]
    fn h1_equals_corrector_combination() {
        let p = ModelParams::new(0.8, 0.6, 1.5, 1.0).unwrap();
        let f = generic(grid(), 1.0);
        let c = correctors_1(&f, &p).unwrap();
        let dx2 = crate::zhidkov::dx_sobolev_norm_sq(f.grid(), f.values(), 0.0);
        let (a, b, r2) = (p.alpha, p.beta, p.rho * p.rho);
        let combo = dx2 + a * c[0] + b / 2.0 * c[1] + a * a / 3.0 * c[2] + a * a * r2 / 2.0 * c[3];
        assert!(close(functional_h1(&f, &p).unwrap(), combo, 1e-12));
    }

    #[test]
    fn h2_equals_corrector_combination() {
        let p = ModelParams::new(0.8, 0.6, 1.5, 1.0).unwrap();
        let f = generic(grid(), 1.0);
        let c = correctors_2(&f, &p).unwrap();
        let dxx = crate::zhidkov::dx_sobolev_norm_sq(f.grid(), f.values(), 1.0)
            - crate::zhidkov::dx_sobolev_norm_sq(f.grid(), f.values(), 0.0);
        let (a, b) = (p.alpha, p.beta);
        let combo =
            dxx + 2.0 * a * c[0] - 3.0 * a * c[1] + 2.0 * b * c[2] - 0.75 * b * c[3] + b * c[4];
        assert!(close(functional_h2(&f, &p).unwrap(), combo, 1e-11));
    }

    #[test]
    fn beta_zero_h2_has_no_nonlocal_terms() {
        let f = generic(grid(), 1.0);
        let h = |d: f64| functional_h2(&f, &ModelParams::new(1.0, 0.0, d, 1.0).unwrap()).unwrap();
        assert_eq!(h(0.5), h(5.0));
    }

    #[test]
    fn h2_inls_requires_integrable_pair() {
        let f = generic(grid(), 1.0);
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            functional_h2_inls(&f, &p),
            Err(Error::NotIntegrable { .. })
        ));
        assert!(FunctionalReport::compute(&f, &p).unwrap().h2_inls.is_none());
        let q = ModelParams::new(-1.5, 1.5, 1.0, 1.0).unwrap();
        assert!(functional_h2_inls(&f, &q).is_ok());
    }

    #[test]
    fn grey_pair_mass_defect() {
        let l = 64.0;
        let g = Grid::new(1024, l).unwrap();
        for theta in [0.0, 0.3, 0.6] {
            let f =
                make_initial_data(&InitialData::GreyPair { theta, x0: l / 4.0 }, &g, 1.0).unwrap();
            let m = renormalized_mass(&f);
            // each dark soliton carries ∫(|q|² - 1)ρ² = -2ρcosθ
            assert!((m + 4.0 * theta.cos()).abs() < 1e-9, "{m}");
        }
    }
}
