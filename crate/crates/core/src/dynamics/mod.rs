//! The gINLS flow: nonlinearity, mollified right-hand side, an
//! integrating-factor RK4 stepper and Duhamel-residual verification.
//!
//! Sign conventions: `∂t u = -i(∂x² u + P_{≤ℓ} N(P_{≤ℓ} u))` with
//! `N(u) = i u (α + iβ T_δ) ∂x|u|²`, so the free part is `U(t) = e^{itξ²}`
//! in Fourier space and plane waves `ρ e^{i(kx + k²t)}` are exact solutions.

mod duhamel;
mod initial;
mod nonlinearity;
mod params;
mod stepper;

pub use duhamel::{duhamel_residual, quadrature_weights};
pub use initial::{grey_pair_profile, make_initial_data, InitialData};
pub use nonlinearity::{nonlinearity, nonlinearity_split, rhs_mollified, rhs_nonlinear_part, Rhs};
pub use params::{ModelParams, NonlocalOperator};
pub use stepper::{evolve, stability_dt, step, Aborted, IfRk4, Trajectory};
