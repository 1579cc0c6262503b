//! Transport equations: coefficients, the operator `L_{1;0}`, constant-coefficient symbols and
//! amplitude recursion, and amplitudes and phase corrections along rays.

mod along_rays;
mod boundary;
mod coefficients;
mod const_coef;
mod phase;
mod symbols;

pub(crate) use along_rays::is_half;
pub use along_rays::{
    closed_form_nodes, phase_correction_nodes, phase_correction_phi1, phase_nodes, polar_amplitude_closed_form,
    potential_phase_nodes, solve_transport_along_rays, transport_nodes, TransportSource,
};
pub use boundary::BoundaryAmplitude;
pub use coefficients::{
    apply_l10, apply_l10_polar, check_nondegenerate, transport_coefficients, TransportCoefficients, DEGENERACY_FRACTION,
};
pub use const_coef::{axis_of, const_coef_amplitudes};
pub use phase::Phase;
pub use symbols::{const_coef_symbol, generalized_binomial, ConstCoefSymbolTable, DEFAULT_NU_MAX};
