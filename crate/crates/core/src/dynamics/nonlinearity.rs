use num_complex::Complex64;

use super::{ModelParams, NonlocalOperator};
use crate::spectral::{lp_at_most_value, tdelta_dx_value, FieldState, Grid};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Precomputed symbols for evaluating `N` and the mollified right-hand side
/// on one grid. Cheap to share across threads (read-only after `new`).
#[derive(Debug, Clone)]
pub struct Rhs {
    grid: Grid,
    params: ModelParams,
    deriv: Vec<Complex64>,
    nonlocal: Vec<f64>,
    xi_sq: Vec<f64>,
    projector: Option<Vec<f64>>,
    mask: Option<Vec<bool>>,
}

impl Rhs {
    pub fn new(grid: &Grid, params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let nyq = grid.nyquist_index();
        let xi = grid.wavenumbers();
        let deriv = xi
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                if k == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    I * x
                }
            })
            .collect();
        let nonlocal = xi
            .iter()
            .map(|&x| match params.nonlocal {
                NonlocalOperator::Tdelta => tdelta_dx_value(x, params.delta),
                NonlocalOperator::Hilbert => x.abs(),
            })
            .collect();
        let projector = params
            .moll_level
            .map(|l| xi.iter().map(|&x| lp_at_most_value(x, l)).collect());
        let mask = params.dealias.then(|| grid.dealias_mask());
        Ok(Rhs {
            grid: grid.clone(),
            params: *params,
            deriv,
            nonlocal,
            xi_sq: xi.iter().map(|x| x * x).collect(),
            projector,
            mask,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub(crate) fn xi_sq(&self) -> &[f64] {
        &self.xi_sq
    }

    fn apply_mask(&self, spec: &mut [Complex64]) {
        if let Some(mask) = &self.mask {
            for (z, &keep) in spec.iter_mut().zip(mask) {
                if !keep {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    pub(crate) fn apply_projector(&self, spec: &mut [Complex64]) {
        if let Some(p) = &self.projector {
            for (z, w) in spec.iter_mut().zip(p) {
                *z *= w;
            }
        }
    }

    /// `ŝ` for `s = |u|²`, dealiased when enabled.
    fn density_spectrum(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut s: Vec<Complex64> = u
            .iter()
            .map(|z| Complex64::new(z.norm_sqr(), 0.0))
            .collect();
        self.grid.forward_in_place(&mut s);
        self.apply_mask(&mut s);
        s
    }

    /// Spectrum of `N(u)`, dealiased when enabled.
    pub(crate) fn nonlinearity_spectrum(
        &self,
        u: &[Complex64],
        time: f64,
    ) -> Result<Vec<Complex64>> {
        let s_hat = self.density_spectrum(u);
        // ∂s and T∂s are both real: pack them into one inverse transform
        let mut packed: Vec<Complex64> = s_hat
            .iter()
            .zip(&self.deriv)
            .zip(&self.nonlocal)
            .map(|((s, d), t)| s * d + I * s * t)
            .collect();
        self.grid.inverse_in_place(&mut packed);
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut n: Vec<Complex64> = u
            .iter()
            .zip(&packed)
            .map(|(z, w)| z * (I * a * w.re - b * w.im))
            .collect();
        if n.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time });
        }
        self.grid.forward_in_place(&mut n);
        self.apply_mask(&mut n);
        Ok(n)
    }

    /// `N(u)` at the grid points.
    pub fn nonlinearity_values(&self, u: &[Complex64], time: f64) -> Result<Vec<Complex64>> {
        let mut n = self.nonlinearity_spectrum(u, time)?;
        self.grid.inverse_in_place(&mut n);
        Ok(n)
    }

    /// `(N_δ(u), N_∞(u))` at the grid points, `N_δ = -βu L_δ|u|²` and
    /// `N_∞ = iu(α + iβH)∂x|u|²`.
    pub fn split_values(
        &self,
        u: &[Complex64],
        time: f64,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let s_hat = self.density_spectrum(u);
        let xi = self.grid.wavenumbers();
        let mut packed: Vec<Complex64> = s_hat
            .iter()
            .zip(&self.deriv)
            .zip(xi)
            .map(|((s, d), &x)| s * d + I * s * x.abs())
            .collect();
        self.grid.inverse_in_place(&mut packed);
        let mut low: Vec<Complex64> = match self.params.nonlocal {
            NonlocalOperator::Tdelta => s_hat
                .iter()
                .zip(&self.nonlocal)
                .zip(xi)
                .map(|((s, t), &x)| s * (t - x.abs()))
                .collect(),
            NonlocalOperator::Hilbert => vec![Complex64::new(0.0, 0.0); u.len()],
        };
        self.grid.inverse_in_place(&mut low);
        let (a, b) = (self.params.alpha, self.params.beta);
        let mut n_delta: Vec<Complex64> = u.iter().zip(&low).map(|(z, l)| -b * z * l.re).collect();
        let mut n_inf: Vec<Complex64> = u
            .iter()
            .zip(&packed)
            .map(|(z, w)| z * (I * a * w.re - b * w.im))
            .collect();
        for part in [&mut n_delta, &mut n_inf] {
            if part.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite { time });
            }
            self.grid.forward_in_place(part);
            self.apply_mask(part);
            self.grid.inverse_in_place(part);
        }
        Ok((n_delta, n_inf))
    }

    /// `-i P̂ N(P u)` in transform space, given `û`: the part of the
    /// right-hand side the integrating factor does not absorb.
    pub fn nonlinear_part_spectral(
        &self,
        u_hat: &[Complex64],
        time: f64,
    ) -> Result<Vec<Complex64>> {
        let mut u = u_hat.to_vec();
        self.apply_projector(&mut u);
        self.grid.inverse_in_place(&mut u);
        let mut n = self.nonlinearity_spectrum(&u, time)?;
        self.apply_projector(&mut n);
        for z in n.iter_mut() {
            *z *= -I;
        }
        Ok(n)
    }

    /// `∂t u = -i(∂x²u + P N(P u))` at the grid points.
    pub fn full_values(&self, u: &[Complex64], time: f64) -> Result<Vec<Complex64>> {
        let u_hat = self.grid.forward(u);
        let mut out = self.nonlinear_part_spectral(&u_hat, time)?;
        for ((o, z), x2) in out.iter_mut().zip(&u_hat).zip(&self.xi_sq) {
            *o += I * x2 * z;
        }
        self.grid.inverse_in_place(&mut out);
        Ok(out)
    }

    /// Nonlinear part `-i P N(P u)` at the grid points.
    pub fn nonlinear_values(&self, u: &[Complex64], time: f64) -> Result<Vec<Complex64>> {
        let mut out = self.nonlinear_part_spectral(&self.grid.forward(u), time)?;
        self.grid.inverse_in_place(&mut out);
        Ok(out)
    }
}

fn check_rho(f: &FieldState, p: &ModelParams) -> Result<()> {
    if f.rho() != p.rho {
        return Err(Error::RhoMismatch(f.rho(), p.rho));
    }
    Ok(())
}

/// `N(f) = i f (α + iβT_δ)∂x|f|²`, pseudo-spectrally.
pub fn nonlinearity(f: &FieldState, p: &ModelParams) -> Result<FieldState> {
    check_rho(f, p)?;
    let rhs = Rhs::new(f.grid(), p)?;
    f.with_values(rhs.nonlinearity_values(f.values(), f.time())?)
}

/// `(N_δ(f), N_∞(f))`.
pub fn nonlinearity_split(f: &FieldState, p: &ModelParams) -> Result<(FieldState, FieldState)> {
    check_rho(f, p)?;
    let rhs = Rhs::new(f.grid(), p)?;
    let (a, b) = rhs.split_values(f.values(), f.time())?;
    Ok((f.with_values(a)?, f.with_values(b)?))
}

/// Full mollified right-hand side `-i(∂x²f + P_{≤ℓ}N(P_{≤ℓ}f))`.
pub fn rhs_mollified(f: &FieldState, p: &ModelParams) -> Result<FieldState> {
    check_rho(f, p)?;
    let rhs = Rhs::new(f.grid(), p)?;
    f.with_values(rhs.full_values(f.values(), f.time())?)
}

/// Nonlinear part `-iP_{≤ℓ}N(P_{≤ℓ}f)` only.
pub fn rhs_nonlinear_part(f: &FieldState, p: &ModelParams) -> Result<FieldState> {
    check_rho(f, p)?;
    let rhs = Rhs::new(f.grid(), p)?;
    f.with_values(rhs.nonlinear_values(f.values(), f.time())?)
}
