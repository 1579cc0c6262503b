//! Media, eikonal phases, rays and ray-lattice charts.

mod chart;
mod conductivity;
mod config;
mod eikonal;
mod medium;
mod omega;
mod profile;
pub(crate) mod ray;

pub use chart::{build_polar_chart, ChartBase, ChartNode, ChartOptions, ChartSampling, PolarChart};
pub use conductivity::{medium_from_conductivity, CONDUCTIVITY_EXTERIOR_TOL};
pub use config::{MediumConfig, MediumKind};
pub use eikonal::{eikonal_distance, eikonal_distance_with, eikonal_plane, FmmOptions};
pub use medium::Medium;
pub use omega::Omega;
pub use profile::{Jet, SampledProfile, ScalarProfile};
pub use ray::{trace_ray, Ray, RayFan, RayOptions, RayPoint};
