//! Modified energies, their correctors, the integrable-hierarchy
//! diagnostics and the local conservation identities.
//!
//! Notation: `s = |u|²`, `q = Im[ū∂x u]`, `T∂ = T_δ∂x` (or `H∂x` when the
//! model uses the Hilbert transform).

mod bounds;
mod functionals;
mod identities;
mod local;

pub use bounds::{
    apriori_e1_bound, calibrate_gronwall, coercivity_gap, coercivity_lower_bound,
    gronwall_envelope, gronwall_integrand,
};
pub use functionals::{
    correctors_1, correctors_2, functional_h1, functional_h2, functional_h2_inls, hierarchy_e,
    renormalized_mass, FunctionalReport, HierarchyLevel,
};
pub use identities::{imim_identity_residual, imim_identity_sides, tderiv_identity_residuals};
