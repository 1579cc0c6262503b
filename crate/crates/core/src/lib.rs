//! Geometrical-optics solutions of the fractional Helmholtz equation
//! `((-Delta)^s - tau^{2s} r^{2s} + q) u = 0`.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments,
    clippy::large_enum_variant
)]

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod media;
pub mod presets;
pub mod provenance;
pub mod residual;
pub mod smooth;
pub mod spectral;
pub mod transport;
pub mod xray;

pub use error::{Error, Result};
pub use spectral::{Field, Grid, Mask, MultiplierSpec, Point};
