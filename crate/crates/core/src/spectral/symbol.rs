use std::fmt;

use num_complex::Complex64;

use super::{FieldState, Grid};
use crate::{Error, Result};

/// What a [`MultiplierSymbol`] realises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolTag {
    Identity,
    Deriv(u32),
    Hilbert,
    /// `H∂x`, symbol `|ξ|`.
    HilbertDx,
    TdeltaDx {
        delta: f64,
    },
    Ldelta {
        delta: f64,
    },
    Propagator {
        t: f64,
    },
    LpAtMost(u32),
    LpBlock(u32),
    Product,
}

impl fmt::Display for SymbolTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolTag::Identity => write!(f, "identity"),
            SymbolTag::Deriv(k) => write!(f, "deriv({k})"),
            SymbolTag::Hilbert => write!(f, "hilbert"),
            SymbolTag::HilbertDx => write!(f, "hilbert_dx"),
            SymbolTag::TdeltaDx { delta } => write!(f, "Tdelta_dx(δ={delta})"),
            SymbolTag::Ldelta { delta } => write!(f, "Ldelta(δ={delta})"),
            SymbolTag::Propagator { t } => write!(f, "propagator({t})"),
            SymbolTag::LpAtMost(l) => write!(f, "lp_le({l})"),
            SymbolTag::LpBlock(l) => write!(f, "lp_block({l})"),
            SymbolTag::Product => write!(f, "product"),
        }
    }
}

/// Littlewood-Paley projection flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpKind {
    /// `P_{≤ℓ}`, symbol `φ(ξ/2^ℓ)`.
    AtMost,
    /// `P_ℓ = P_{≤ℓ} - P_{≤ℓ-1}` (`P_0 = P_{≤0}`).
    Block,
}

/// Diagonal Fourier multiplier: one value per grid wavenumber.
#[derive(Debug, Clone)]
pub struct MultiplierSymbol {
    grid: Grid,
    values: Vec<Complex64>,
    tag: SymbolTag,
}

impl MultiplierSymbol {
    fn from_real(grid: &Grid, tag: SymbolTag, f: impl Fn(f64) -> f64) -> Self {
        let values = grid
            .wavenumbers()
            .iter()
            .map(|&xi| Complex64::new(f(xi), 0.0))
            .collect();
        MultiplierSymbol {
            grid: grid.clone(),
            values,
            tag,
        }
    }

    pub fn identity(grid: &Grid) -> Self {
        Self::from_real(grid, SymbolTag::Identity, |_| 1.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tag(&self) -> SymbolTag {
        self.tag
    }

    /// Real parts, for symbols known to be real.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// Pointwise product: the composition of the two diagonal operators.
    pub fn compose(&self, other: &MultiplierSymbol) -> Result<MultiplierSymbol> {
        self.grid.same_as(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(MultiplierSymbol {
            grid: self.grid.clone(),
            values,
            tag: SymbolTag::Product,
        })
    }

    /// Multiply a spectrum in place.
    pub fn apply_spectrum(&self, spectrum: &mut [Complex64]) {
        assert_eq!(
            spectrum.len(),
            self.values.len(),
            "spectrum length does not match symbol"
        );
        for (z, s) in spectrum.iter_mut().zip(&self.values) {
            *z *= s;
        }
    }

    /// Transform, multiply, inverse transform.
    pub fn apply_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = self.grid.forward(values);
        self.apply_spectrum(&mut buf);
        self.grid.inverse_in_place(&mut buf);
        buf
    }

    /// Real part of the action on real samples.
    pub fn apply_real(&self, values: &[f64]) -> Vec<f64> {
        let c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.apply_values(&c).into_iter().map(|z| z.re).collect()
    }

    pub fn apply(&self, f: &FieldState) -> Result<FieldState> {
        self.grid.same_as(f.grid())?;
        f.with_values(self.apply_values(f.values()))
    }
}

/// `(iξ)^k`, with the Nyquist mode zeroed for odd `k`.
pub fn symbol_deriv(grid: &Grid, k: u32) -> Result<MultiplierSymbol> {
    if k == 0 {
        return Err(Error::invalid("k", "derivative order must be at least 1"));
    }
    let nyq = grid.nyquist_index();
    let values = grid
        .wavenumbers()
        .iter()
        .enumerate()
        .map(|(idx, &xi)| {
            if k % 2 == 1 && idx == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, xi).powu(k)
            }
        })
        .collect();
    Ok(MultiplierSymbol {
        grid: grid.clone(),
        values,
        tag: SymbolTag::Deriv(k),
    })
}

/// `-i sgn(ξ)`; zero at `ξ = 0` and at the Nyquist mode, where the odd
/// symbol has no real-preserving value on the grid.
pub fn symbol_hilbert(grid: &Grid) -> MultiplierSymbol {
    let nyq = grid.nyquist_index();
    let values = grid
        .wavenumbers()
        .iter()
        .enumerate()
        .map(|(idx, &xi)| {
            if idx == nyq || xi == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -xi.signum())
            }
        })
        .collect();
    MultiplierSymbol {
        grid: grid.clone(),
        values,
        tag: SymbolTag::Hilbert,
    }
}

/// `H∂x`, symbol `|ξ|`.
pub fn symbol_hilbert_dx(grid: &Grid) -> MultiplierSymbol {
    MultiplierSymbol::from_real(grid, SymbolTag::HilbertDx, f64::abs)
}

/// `r_δ(ξ) = (coth(δξ) - sgn ξ) ξ`, evaluated without cancellation as
/// `2|ξ| / expm1(2δ|ξ|)`. Zero at `ξ = 0`.
pub fn ldelta_value(xi: f64, delta: f64) -> f64 {
    let a = xi.abs();
    if a == 0.0 {
        return 0.0;
    }
    let d = (2.0 * delta * a).exp_m1();
    if d.is_infinite() {
        0.0
    } else {
        2.0 * a / d
    }
}

/// `ξ coth(δξ)`, with the zero-mode value 0.
pub fn tdelta_dx_value(xi: f64, delta: f64) -> f64 {
    if xi == 0.0 {
        0.0
    } else {
        xi.abs() + ldelta_value(xi, delta)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "delta",
            format!("depth must be positive, got {delta}"),
        ))
    }
}

/// `T_δ∂x`, symbol `ξ coth(δξ)` (real, even, non-negative; 0 at `ξ = 0`).
pub fn symbol_tdelta_dx(grid: &Grid, delta: f64) -> Result<MultiplierSymbol> {
    check_delta(delta)?;
    Ok(MultiplierSymbol::from_real(
        grid,
        SymbolTag::TdeltaDx { delta },
        |xi| tdelta_dx_value(xi, delta),
    ))
}

/// `L_δ = (T_δ - H)∂x`, symbol `r_δ(ξ) ∈ (0, 1/δ)` away from `ξ = 0`.
pub fn symbol_ldelta(grid: &Grid, delta: f64) -> Result<MultiplierSymbol> {
    check_delta(delta)?;
    Ok(MultiplierSymbol::from_real(
        grid,
        SymbolTag::Ldelta { delta },
        |xi| ldelta_value(xi, delta),
    ))
}

/// Free Schrödinger group `U(t) = e^{-it∂x²}`, symbol `e^{itξ²}`.
pub fn symbol_propagator(grid: &Grid, t: f64) -> Result<MultiplierSymbol> {
    if !t.is_finite() {
        return Err(Error::invalid("t", "time must be finite"));
    }
    let values = grid
        .wavenumbers()
        .iter()
        .map(|&xi| Complex64::from_polar(1.0, t * xi * xi))
        .collect();
    Ok(MultiplierSymbol {
        grid: grid.clone(),
        values,
        tag: SymbolTag::Propagator { t },
    })
}

fn smooth_step_weight(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// The Littlewood-Paley bump: 1 on `|ξ| ≤ 1`, 0 on `|ξ| ≥ 2`, with the
/// C^∞ transition `h(2-|ξ|) / (h(2-|ξ|) + h(|ξ|-1))`, `h(s) = e^{-1/s}`.
pub fn lp_bump(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let up = smooth_step_weight(2.0 - a);
        let down = smooth_step_weight(a - 1.0);
        up / (up + down)
    }
}

/// Symbol value of `P_{≤ℓ}` at `ξ`.
pub fn lp_at_most_value(xi: f64, level: u32) -> f64 {
    lp_bump(xi / 2f64.powi(level as i32))
}

/// Symbol value of `P_ℓ` at `ξ`.
pub fn lp_block_value(xi: f64, level: u32) -> f64 {
    if level == 0 {
        lp_at_most_value(xi, 0)
    } else {
        lp_at_most_value(xi, level) - lp_at_most_value(xi, level - 1)
    }
}

pub fn symbol_lp(grid: &Grid, level: u32, kind: LpKind) -> MultiplierSymbol {
    match kind {
        LpKind::AtMost => MultiplierSymbol::from_real(grid, SymbolTag::LpAtMost(level), |xi| {
            lp_at_most_value(xi, level)
        }),
        LpKind::Block => MultiplierSymbol::from_real(grid, SymbolTag::LpBlock(level), |xi| {
            lp_block_value(xi, level)
        }),
    }
}

/// Smallest level `J` with `P_{≤J} = I` on every grid mode.
pub fn lp_top_level(grid: &Grid) -> u32 {
    let xi_max = grid.max_wavenumber();
    let mut j = 0u32;
    while 2f64.powi(j as i32) < xi_max {
        j += 1;
    }
    j
}
