//! Geodesic ray transform of the weighted potential, pairing of geometric-optics solutions,
//! regularized inversion and the noise-stability experiment.

mod cg;
mod data;
mod geometry;
mod operator;
mod pairing;
mod stability;
mod weighted;

pub use cg::{invert_cg, CgReport};
pub use data::XRayData;
pub use geometry::{RayCoordinate, XRayGeometry, DEFAULT_BASE_POINTS, DEFAULT_DIRECTIONS};
pub use operator::{ray_transform, ray_transform_fn, RayOperator};
pub use pairing::alessandrini_pairing;
pub use stability::{
    alpha1, optimal_tau, predicted_gamma, stability_experiment, Phantom, StabilityCell, StabilityConfig,
    StabilityReport, StabilitySetup,
};
pub use weighted::{weighted_potential, WeightedPotential};
