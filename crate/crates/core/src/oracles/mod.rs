//! Transform-free reference implementations used to validate the spectral
//! layer: principal-value kernel quadrature for `T_δ`, a line Fourier
//! multiplier evaluated by adaptive quadrature, and the hyperbolic Fourier
//! identities behind the `T_δ` symbol.

mod consistency;
mod fourier;
mod hyperbolic;
mod kernel;
mod quad;

pub use consistency::{
    deepwater_gap, grid_vs_line, kernel_vs_line, operator_corpus, CorpusFunction, GridLineReport,
};
pub use fourier::{cosech_fourier_check, coth_fourier_check, tanh_fourier_check, FourierCheck};
pub use hyperbolic::hyperbolic_identity_suite;
pub use kernel::{
    kernel_hilbert_pv, kernel_tdelta_pv, line_multiplier_hilbert, line_multiplier_tdelta,
    LineSampledFunction,
};
pub use quad::integrate_panels;
