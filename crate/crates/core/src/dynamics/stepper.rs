use std::fmt;

use num_complex::Complex64;

use super::{ModelParams, Rhs};
use crate::spectral::{FieldState, Grid};
use crate::{Error, Result};

/// Integrating-factor classical RK4 with a fixed step.
///
/// With `û = e^{itξ²} v̂` the linear part is absorbed exactly and RK4 is
/// applied to `v̂_t = e^{-itξ²} F(e^{itξ²} v̂)`, `F = -iP̂N(P·)`.
#[derive(Debug, Clone)]
pub struct IfRk4 {
    rhs: Rhs,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl IfRk4 {
    pub fn new(grid: &Grid, params: &ModelParams, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        let rhs = Rhs::new(grid, params)?;
        let phase = |h: f64| {
            rhs.xi_sq()
                .iter()
                .map(|x2| Complex64::from_polar(1.0, x2 * h))
                .collect()
        };
        let half = phase(0.5 * dt);
        let full = phase(dt);
        Ok(IfRk4 {
            rhs,
            dt,
            half,
            full,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn rhs(&self) -> &Rhs {
        &self.rhs
    }

    /// Advance `û` by one step starting at time `t`.
    pub fn step_spectral(&self, u_hat: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let h = self.dt;
        let f = |v: &[Complex64], s: f64| self.rhs.nonlinear_part_spectral(v, s);
        let k1 = f(u_hat, t)?;
        let a: Vec<Complex64> = u_hat
            .iter()
            .zip(&k1)
            .zip(&self.half)
            .map(|((u, k), e)| e * (u + 0.5 * h * k))
            .collect();
        let k2 = f(&a, t + 0.5 * h)?;
        let b: Vec<Complex64> = u_hat
            .iter()
            .zip(&k2)
            .zip(&self.half)
            .map(|((u, k), e)| e * u + 0.5 * h * k)
            .collect();
        let k3 = f(&b, t + 0.5 * h)?;
        let c: Vec<Complex64> = u_hat
            .iter()
            .zip(&k3)
            .zip(self.half.iter().zip(&self.full))
            .map(|((u, k), (eh, ef))| ef * u + h * eh * k)
            .collect();
        let k4 = f(&c, t + h)?;
        let out: Vec<Complex64> = (0..u_hat.len())
            .map(|j| {
                let (eh, ef) = (self.half[j], self.full[j]);
                ef * u_hat[j] + h / 6.0 * (ef * k1[j] + 2.0 * eh * (k2[j] + k3[j]) + k4[j])
            })
            .collect();
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time: t + h });
        }
        Ok(out)
    }

    pub fn step(&self, f: &FieldState) -> Result<FieldState> {
        let u_hat = f.grid().forward(f.values());
        let mut next = self.step_spectral(&u_hat, f.time())?;
        f.grid().inverse_in_place(&mut next);
        FieldState::new(f.grid().clone(), next, f.rho(), f.time() + self.dt)
    }
}

/// One step of size `dt`.
pub fn step(f: &FieldState, dt: f64, p: &ModelParams) -> Result<FieldState> {
    if f.rho() != p.rho {
        return Err(Error::RhoMismatch(f.rho(), p.rho));
    }
    IfRk4::new(f.grid(), p, dt)?.step(f)
}

/// Default step: `min(0.5/ξ_max, 0.05·dx/(1 + max|u|²))`.
pub fn stability_dt(f: &FieldState) -> f64 {
    let g = f.grid();
    let m = f.max_modulus();
    (0.5 / g.max_wavenumber()).min(0.05 * g.dx() / (1.0 + m * m))
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<FieldState>,
    pub params: ModelParams,
    pub dt: f64,
    pub stepper_order: u32,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time()).collect()
    }

    pub fn initial(&self) -> &FieldState {
        &self.states[0]
    }

    pub fn last(&self) -> &FieldState {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// A failed run: the error and everything recorded before it.
#[derive(Debug, Clone)]
pub struct Aborted {
    pub error: Error,
    pub partial: Trajectory,
}

impl fmt::Display for Aborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "run aborted after t = {}: {}",
            self.partial.last().time(),
            self.error
        )
    }
}

impl std::error::Error for Aborted {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Number of steps and the uniform step actually used so that the run ends
/// exactly at `horizon`.
pub(crate) fn step_plan(horizon: f64, dt: f64) -> (usize, f64) {
    let steps = ((horizon / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (steps, horizon / steps as f64)
}

/// Evolve to `horizon` with `⌈T/dt⌉` uniform steps, recording every
/// `record_every` steps plus the first and last state.
#[allow(clippy::result_large_err)]
pub fn evolve(
    f0: &FieldState,
    horizon: f64,
    dt: f64,
    p: &ModelParams,
    record_every: usize,
) -> std::result::Result<Trajectory, Aborted> {
    let mut traj = Trajectory {
        states: vec![f0.clone()],
        params: *p,
        dt,
        stepper_order: 4,
    };
    let fail = |error, traj| {
        Err(Aborted {
            error,
            partial: traj,
        })
    };
    if !(horizon > 0.0 && horizon.is_finite()) {
        return fail(
            Error::invalid("horizon", format!("must be positive, got {horizon}")),
            traj,
        );
    }
    if record_every == 0 {
        return fail(Error::invalid("record_every", "must be at least 1"), traj);
    }
    if f0.rho() != p.rho {
        return fail(Error::RhoMismatch(f0.rho(), p.rho), traj);
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return fail(
            Error::invalid("dt", format!("must be positive, got {dt}")),
            traj,
        );
    }
    let (steps, h) = step_plan(horizon, dt);
    traj.dt = h;
    let stepper = match IfRk4::new(f0.grid(), p, h) {
        Ok(s) => s,
        Err(e) => return fail(e, traj),
    };
    let grid = f0.grid();
    let t0 = f0.time();
    let mut u_hat = grid.forward(f0.values());
    for k in 1..=steps {
        let t_prev = t0 + (k - 1) as f64 * h;
        u_hat = match stepper.step_spectral(&u_hat, t_prev) {
            Ok(v) => v,
            Err(e) => return fail(e, traj),
        };
        if k % record_every == 0 || k == steps {
            let t = if k == steps {
                t0 + horizon
            } else {
                t0 + k as f64 * h
            };
            let values = grid.inverse(&u_hat);
            match FieldState::new(grid.clone(), values, f0.rho(), t) {
                Ok(s) => traj.states.push(s),
                Err(e) => return fail(e, traj),
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn smooth(g: Grid) -> FieldState {
        FieldState::from_fn(g, 1.0, |x| {
            Complex64::new(1.0 + 0.2 * x.cos(), 0.1 * (2.0 * x).sin() + 0.05 * x.cos())
        })
        .unwrap()
    }

    fn max_diff(a: &FieldState, b: &FieldState) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_is_stationary() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let p = ModelParams::inls(1.0, 1.5).unwrap();
        let c = FieldState::constant(g, 1.5).unwrap();
        let s = step(&c, 0.01, &p).unwrap();
        assert!(max_diff(&s, &c) < 1e-14);
        assert!((s.time() - 0.01).abs() < 1e-16);
        let tr = evolve(&c, 1.0, 0.01, &p, 10).unwrap();
        assert!(max_diff(tr.last(), &c) < 1e-12);
        assert_eq!(tr.last().time(), 1.0);
    }

    #[test]
    fn plane_wave_is_exact() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        for &(k, rho) in &[(1.0, 1.0), (3.0, 0.7), (-2.0, 1.4)] {
            let p = ModelParams::new(1.0, 0.6, 0.8, rho).unwrap();
            let f =
                FieldState::from_fn(g.clone(), rho, |x| Complex64::from_polar(rho, k * x)).unwrap();
            let tr = evolve(&f, 1.0, 0.01, &p, 25).unwrap();
            let exact = FieldState::from_fn(g.clone(), rho, |x| {
                Complex64::from_polar(rho, k * x + k * k)
            })
            .unwrap();
            assert!(max_diff(tr.last(), &exact) < 1e-10);
        }
    }

    #[test]
    fn records_first_last_and_uniform() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let p = ModelParams::inls(1.0, 1.0).unwrap();
        let tr = evolve(&smooth(g), 0.1, 0.003, &p, 4).unwrap();
        // ⌈0.1/0.003⌉ = 34 steps, records at 0,4,…,32 and 34
        assert_eq!(tr.len(), 10);
        assert!((tr.dt - 0.1 / 34.0).abs() < 1e-16);
        let t = tr.times();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*t.last().unwrap(), 0.1);
    }

    #[test]
    fn richardson_fourth_order() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let f = smooth(g);
        let horizon = 0.2;
        let run = |dt: f64| {
            evolve(&f, horizon, dt, &p, usize::MAX)
                .unwrap()
                .last()
                .clone()
        };
        let dt = 0.004;
        let reference = run(dt / 8.0);
        let e1 = max_diff(&run(dt), &reference);
        let e2 = max_diff(&run(dt / 2.0), &reference);
        let ratio = e1 / e2;
        assert!(
            (12.8..=19.2).contains(&ratio),
            "ratio {ratio}, e1 {e1}, e2 {e2}"
        );
    }

    #[test]
    fn invalid_arguments() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let p = ModelParams::inls(1.0, 1.0).unwrap();
        let f = smooth(g);
        assert!(step(&f, 0.0, &p).is_err());
        assert!(evolve(&f, -1.0, 0.1, &p, 1).is_err());
        let err = evolve(&f, 1.0, 0.1, &p, 0).unwrap_err();
        assert_eq!(err.partial.len(), 1);
    }

    #[test]
    fn blow_up_keeps_partial_trajectory() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let p = ModelParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let f = FieldState::from_fn(g, 1.0, |x| {
            Complex64::new(1.0 + 0.9 * (20.0 * x).cos(), 0.0)
        })
        .unwrap();
        // absurdly large step on a rough state overflows
        match evolve(&f, 1e6, 10.0, &p, 1) {
            Err(a) => {
                assert!(matches!(a.error, Error::NonFinite { .. }));
                assert!(!a.partial.is_empty());
                assert!(a.to_string().contains("aborted"));
            }
            Ok(_) => panic!("expected overflow"),
        }
    }
}
