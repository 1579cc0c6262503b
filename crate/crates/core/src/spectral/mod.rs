//! Periodic grids, complex fields and Fourier multipliers.

mod fft;
mod field;
mod grid;
pub mod io;
mod multiplier;
mod oracle;

pub use field::{Field, Mask};
pub use grid::{Grid, Point};
pub use multiplier::{
    apply_multiplier, cumulative_integral, default_resonance_guard, derivative, frac_laplacian, gradient, hessian,
    jitter_tau, laplacian, mollify, resonance_gap, sobolev_norm_scl, solve_const_helmholtz, MultiplierSpec, PolyTerm,
};
pub use oracle::{frac_lap_point_oracle, oracle_constant, QuadratureConfig};
