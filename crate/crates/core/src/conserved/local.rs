use num_complex::Complex64;

use crate::dynamics::{ModelParams, NonlocalOperator};
use crate::spectral::{
    symbol_deriv, symbol_hilbert_dx, symbol_tdelta_dx, FieldState, Grid, MultiplierSymbol,
};
use crate::Result;

/// Spectral derivatives and the nonlocal operator on one grid.
pub(crate) struct Ops {
    pub grid: Grid,
    d: Vec<MultiplierSymbol>,
    tdx: MultiplierSymbol,
}

impl Ops {
    pub fn new(grid: &Grid, p: &ModelParams) -> Result<Self> {
        let d = (1..=3)
            .map(|k| symbol_deriv(grid, k))
            .collect::<Result<Vec<_>>>()?;
        let tdx = match p.nonlocal {
            NonlocalOperator::Tdelta => symbol_tdelta_dx(grid, p.delta)?,
            NonlocalOperator::Hilbert => symbol_hilbert_dx(grid),
        };
        Ok(Ops {
            grid: grid.clone(),
            d,
            tdx,
        })
    }

    /// `∂x^k` of complex samples, `k ∈ 1..=3`.
    pub fn dc(&self, v: &[Complex64], k: usize) -> Vec<Complex64> {
        self.d[k - 1].apply_values(v)
    }

    pub fn dr(&self, v: &[f64], k: usize) -> Vec<f64> {
        self.d[k - 1].apply_real(v)
    }

    /// `T∂` of real samples (the mean is annihilated).
    pub fn t(&self, v: &[f64]) -> Vec<f64> {
        self.tdx.apply_real(v)
    }

    pub fn integrate(&self, v: impl IntoIterator<Item = f64>) -> f64 {
        self.grid.integrate(v)
    }
}

/// Pointwise building blocks shared by the functionals.
pub(crate) struct Local {
    pub ux: Vec<Complex64>,
    pub uxx: Vec<Complex64>,
    pub s: Vec<f64>,
    pub sx: Vec<f64>,
    pub sxx: Vec<f64>,
    /// `Im[ū u_x]`
    pub q: Vec<f64>,
    /// `|u_x|²`
    pub ux2: Vec<f64>,
    /// `T∂s`
    pub ts: Vec<f64>,
}

impl Local {
    pub fn new(ops: &Ops, f: &FieldState) -> Self {
        let u = f.values();
        let ux = ops.dc(u, 1);
        let uxx = ops.dc(u, 2);
        let s: Vec<f64> = u.iter().map(|z| z.norm_sqr()).collect();
        let sx = ops.dr(&s, 1);
        let sxx = ops.dr(&s, 2);
        let q = u.iter().zip(&ux).map(|(a, b)| (a.conj() * b).im).collect();
        let ux2 = ux.iter().map(|z| z.norm_sqr()).collect();
        let ts = ops.t(&s);
        Local {
            ux,
            uxx,
            s,
            sx,
            sxx,
            q,
            ux2,
            ts,
        }
    }
}
