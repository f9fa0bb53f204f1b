use num_complex::Complex64;

use super::local::Ops;
use crate::dynamics::{ModelParams, Trajectory};
use crate::spectral::FieldState;
use crate::{Error, Result};

/// Densities `|u|², |∂u|², |∂²u|², Im[ū∂u]` and the right-hand sides of
/// their time-derivative identities at one state.
fn densities_and_rhs(ops: &Ops, f: &FieldState, p: &ModelParams) -> ([Vec<f64>; 4], [Vec<f64>; 4]) {
    let (a, b) = (p.alpha, p.beta);
    let u = f.values();
    let ux = ops.dc(u, 1);
    let uxx = ops.dc(u, 2);
    let uxxx = ops.dc(u, 3);
    let s: Vec<f64> = u.iter().map(|z| z.norm_sqr()).collect();
    let sx = ops.dr(&s, 1);
    let sxx = ops.dr(&s, 2);
    let sxxx = ops.dr(&s, 3);
    let im = |x: &[Complex64], y: &[Complex64]| -> Vec<f64> {
        x.iter().zip(y).map(|(p, q)| (p.conj() * q).im).collect()
    };
    let q = im(u, &ux);
    let q12 = im(&ux, &uxx);
    let q23 = im(&uxx, &uxxx);
    let ux2: Vec<f64> = ux.iter().map(|z| z.norm_sqr()).collect();
    let uxx2: Vec<f64> = uxx.iter().map(|z| z.norm_sqr()).collect();
    let t_sx = ops.t(&sx);
    let t_sxx = ops.t(&sxx);
    let n = s.len();

    let flux1: Vec<f64> = (0..n).map(|j| 2.0 * q[j] + a * s[j] * s[j]).collect();
    let rhs1 = ops.dr(&flux1, 1);

    let flux2: Vec<f64> = (0..n)
        .map(|j| 2.0 * q12[j] + 0.5 * a * sx[j] * sx[j])
        .collect();
    let d2 = ops.dr(&flux2, 1);
    let rhs2 = (0..n)
        .map(|j| d2[j] + 2.0 * a * ux2[j] * sx[j] + 2.0 * b * q[j] * t_sx[j])
        .collect();

    let flux3: Vec<f64> = (0..n)
        .map(|j| 2.0 * q23[j] + 0.5 * a * sxx[j] * sxx[j])
        .collect();
    let d3 = ops.dr(&flux3, 1);
    let d_ux2 = ops.dr(&ux2, 1);
    let dq = ops.dr(&q, 1);
    let rhs3 = (0..n)
        .map(|j| {
            d3[j] + 2.0 * a * uxx2[j] * sx[j] + 2.0 * a * d_ux2[j] * sxx[j]
                - 2.0 * a * ux2[j] * sxxx[j]
                + 4.0 * b * q12[j] * t_sx[j]
                + 2.0 * b * dq[j] * t_sxx[j]
        })
        .collect();

    let rhs4 = (0..n)
        .map(|j| 2.0 * d_ux2[j] - 0.5 * sxxx[j] + 2.0 * a * q[j] * sx[j] + b * s[j] * t_sx[j])
        .collect();

    ([s, ux2, uxx2, q], [rhs1, rhs2, rhs3, rhs4])
}

/// For each local identity, the largest `L²` norm over interior records of
/// `(D(t+τ) - D(t-τ))/2τ - RHS(t)`.
pub fn tderiv_identity_residuals(traj: &Trajectory) -> Result<[f64; 4]> {
    let states = &traj.states;
    if states.len() < 3 {
        return Err(Error::InsufficientRecords {
            found: states.len(),
            needed: 3,
        });
    }
    let m = states.len() - 1;
    let t0 = states[0].time();
    let tau = (states[m].time() - t0) / m as f64;
    for (j, s) in states.iter().enumerate() {
        if (s.time() - (t0 + j as f64 * tau)).abs() > 1e-9 * tau.max(1.0) {
            return Err(Error::NonUniformRecords);
        }
    }
    let ops = Ops::new(states[0].grid(), &traj.params)?;
    let data: Vec<_> = states
        .iter()
        .map(|s| densities_and_rhs(&ops, s, &traj.params))
        .collect();
    let mut out = [0.0f64; 4];
    for j in 1..m {
        for (k, slot) in out.iter_mut().enumerate() {
            let (prev, next) = (&data[j - 1].0[k], &data[j + 1].0[k]);
            let rhs = &data[j].1[k];
            let r = ops
                .integrate(
                    (0..rhs.len()).map(|i| ((next[i] - prev[i]) / (2.0 * tau) - rhs[i]).powi(2)),
                )
                .sqrt();
            *slot = slot.max(r);
        }
    }
    Ok(out)
}

/// `(∫Im[ū_x u_xx]∂x Im[ū u_x], ½∫|u_xx|²∂x|u|² - ¼∫∂x|u_x|²·∂x²|u|²)`.
pub fn imim_identity_sides(f: &FieldState) -> (f64, f64) {
    let g = f.grid();
    let u = f.values();
    // the identity is local; any nonlocal operator will do for Ops
    let p = ModelParams::new(0.0, 0.0, 1.0, f.rho()).expect("positive rho");
    let ops = Ops::new(g, &p).expect("valid params");
    let ux = ops.dc(u, 1);
    let uxx = ops.dc(u, 2);
    let q: Vec<f64> = u.iter().zip(&ux).map(|(a, b)| (a.conj() * b).im).collect();
    let dq = ops.dr(&q, 1);
    let s: Vec<f64> = u.iter().map(|z| z.norm_sqr()).collect();
    let sx = ops.dr(&s, 1);
    let sxx = ops.dr(&s, 2);
    let ux2: Vec<f64> = ux.iter().map(|z| z.norm_sqr()).collect();
    let d_ux2 = ops.dr(&ux2, 1);
    let n = u.len();
    let lhs = ops.integrate((0..n).map(|j| (ux[j].conj() * uxx[j]).im * dq[j]));
    let rhs =
        ops.integrate((0..n).map(|j| 0.5 * uxx[j].norm_sqr() * sx[j] - 0.25 * d_ux2[j] * sxx[j]));
    (lhs, rhs)
}

/// `|LHS - RHS|` of the `Im·Im` integration-by-parts identity.
pub fn imim_identity_residual(f: &FieldState) -> f64 {
    let (l, r) = imim_identity_sides(f);
    (l - r).abs()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::dynamics::{evolve, make_initial_data, InitialData};
    use crate::spectral::Grid;

    #[test]
    fn imim_trivial_and_random() {
        let g = Grid::new(128, 2.0 * PI).unwrap();
        let c = FieldState::constant(g.clone(), 1.0).unwrap();
        assert!(imim_identity_residual(&c) < 1e-14);
        let w =
            FieldState::from_fn(g.clone(), 1.0, |x| Complex64::from_polar(1.0, 3.0 * x)).unwrap();
        let (l, r) = imim_identity_sides(&w);
        assert!(l.abs() < 1e-10 && r.abs() < 1e-10);
        for seed in 0..5 {
            let f = make_initial_data(
                &InitialData::RandomBand {
                    seed,
                    band: 8,
                    amp: 0.5,
                },
                &g,
                1.0,
            )
            .unwrap();
            let (l, r) = imim_identity_sides(&f);
            assert!((l - r).abs() <= 1e-8 * l.abs().max(r.abs()), "{l} {r}");
        }
    }

    #[test]
    fn constant_identities_vanish() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let p = ModelParams::inls(1.0, 1.0).unwrap();
        let tr = evolve(&FieldState::constant(g, 1.0).unwrap(), 0.1, 0.01, &p, 2).unwrap();
        for r in tderiv_identity_residuals(&tr).unwrap() {
            assert!(r <= 1e-12);
        }
    }

    #[test]
    fn identities_second_order_in_record_interval() {
        let g = Grid::new(128, 2.0 * PI).unwrap();
        let f = FieldState::from_fn(g, 1.0, |x| {
            Complex64::new(
                1.0 + 0.2 * x.cos() + 0.05 * (3.0 * x).cos(),
                0.1 * (2.0 * x).sin(),
            )
        })
        .unwrap();
        for p in [
            ModelParams::new(0.0, 0.0, 1.0, 1.0).unwrap(),
            ModelParams::new(1.0, 0.7, 1.0, 1.0).unwrap(),
        ] {
            let run = |every: usize| {
                let tr = evolve(&f, 0.08, 0.0005, &p, every).unwrap();
                tderiv_identity_residuals(&tr).unwrap()
            };
            let coarse = run(8);
            let fine = run(4);
            for k in 0..4 {
                let ratio = coarse[k] / fine[k];
                assert!(
                    (3.4..=4.6).contains(&ratio),
                    "identity {k}: {} {} ratio {ratio}",
                    coarse[k],
                    fine[k]
                );
            }
        }
    }
}
