use num_complex::Complex64;

use super::{Rhs, Trajectory};
use crate::{Error, Result};

/// Composite quadrature weights on `m + 1` equispaced nodes with unit
/// spacing: Simpson's 1/3 rule, with Simpson's 3/8 rule on the last three
/// intervals when `m` is odd.
pub fn quadrature_weights(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InsufficientRecords {
            found: m + 1,
            needed: 3,
        });
    }
    let mut w = vec![0.0; m + 1];
    let simpson_end = if m.is_multiple_of(2) { m } else { m - 3 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += 1.0 / 3.0;
        w[i + 1] += 4.0 / 3.0;
        w[i + 2] += 1.0 / 3.0;
    }
    if m % 2 == 1 {
        let s = simpson_end;
        for (off, c) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
            w[s + off] += 3.0 / 8.0 * c;
        }
    }
    Ok(w)
}

/// `‖u(T) - U(T)φ + i∫₀ᵀ U(T-s)P N(P u(s)) ds‖ / ‖u(T)‖`, the integral by
/// composite Simpson over the recorded states.
pub fn duhamel_residual(traj: &Trajectory) -> Result<f64> {
    const MIN_RECORDS: usize = 5;
    let states = &traj.states;
    if states.len() < MIN_RECORDS {
        return Err(Error::InsufficientRecords {
            found: states.len(),
            needed: MIN_RECORDS,
        });
    }
    let t0 = states[0].time();
    let t_end = states[states.len() - 1].time();
    let m = states.len() - 1;
    let tau = (t_end - t0) / m as f64;
    for (j, s) in states.iter().enumerate() {
        if (s.time() - (t0 + j as f64 * tau)).abs() > 1e-9 * tau.max(1.0) {
            return Err(Error::NonUniformRecords);
        }
    }
    let grid = states[0].grid().clone();
    let rhs = Rhs::new(&grid, &traj.params)?;
    let weights = quadrature_weights(m)?;
    let xi_sq = rhs.xi_sq();
    let span = t_end - t0;

    let mut acc = vec![Complex64::new(0.0, 0.0); grid.n()];
    for (s, w) in states.iter().zip(&weights) {
        grid.same_as(s.grid())?;
        // nonlinear_part_spectral returns -i P̂N, so +i∫U N = -∫U (-iN)
        let part = rhs.nonlinear_part_spectral(&grid.forward(s.values()), s.time())?;
        let lag = t_end - s.time();
        for ((a, z), x2) in acc.iter_mut().zip(&part).zip(xi_sq) {
            *a -= w * tau * Complex64::from_polar(1.0, x2 * lag) * z;
        }
    }
    let phi_hat = grid.forward(states[0].values());
    let last = &states[states.len() - 1];
    let last_hat = grid.forward(last.values());
    let mut res: Vec<Complex64> = last_hat
        .iter()
        .zip(&phi_hat)
        .zip(xi_sq)
        .zip(&acc)
        .map(|(((u, p), x2), a)| u - Complex64::from_polar(1.0, x2 * span) * p + a)
        .collect();
    grid.inverse_in_place(&mut res);
    let norm = last.l2_norm();
    if norm == 0.0 {
        return Err(Error::invalid("trajectory", "final state has zero norm"));
    }
    Ok(grid.l2_norm(&res) / norm)
}
