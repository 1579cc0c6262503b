use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{Medium, Omega};
use crate::spectral::Point;

pub const DEFAULT_BASE_POINTS: usize = 32;
pub const DEFAULT_DIRECTIONS: usize = 64;

/// One line of the transform: base point `p` on the boundary circle and launch angle `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayCoordinate {
    pub p: Point,
    pub theta: f64,
}

/// Uniform base points on the circle bounding `Omega'`, each with a uniform fan of inward
/// directions (open half circle around the inward normal).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XRayGeometry {
    pub center: Point,
    pub radius: f64,
    pub n_base: usize,
    pub n_dirs: usize,
    pub rays: Vec<RayCoordinate>,
}

fn inward_fan(beta: f64, n_dirs: usize) -> impl Iterator<Item = f64> {
    (0..n_dirs).map(move |j| beta + PI - 0.5 * PI + (j as f64 + 0.5) * PI / n_dirs as f64)
}

impl XRayGeometry {
    pub fn around(medium: &Medium, n_base: usize, n_dirs: usize) -> Result<Self> {
        let (center, radius) = match medium.outer() {
            Omega::Disk { center, radius } => (*center, *radius),
            _ => return Err(Error::invalid("ray geometry needs a disk-shaped Omega'")),
        };
        if n_base == 0 || n_dirs == 0 {
            return Err(Error::invalid("ray geometry needs base points and directions"));
        }
        let rays = (0..n_base)
            .flat_map(|i| {
                let beta = 2.0 * PI * i as f64 / n_base as f64;
                let p = [center[0] + radius * beta.cos(), center[1] + radius * beta.sin()];
                inward_fan(beta, n_dirs).map(move |theta| RayCoordinate { p, theta })
            })
            .collect();
        Ok(Self {
            center,
            radius,
            n_base,
            n_dirs,
            rays,
        })
    }

    pub fn default_for(medium: &Medium) -> Result<Self> {
        Self::around(medium, DEFAULT_BASE_POINTS, DEFAULT_DIRECTIONS)
    }

    /// Fan of one base point at angle `beta` on the circle.
    pub fn single_fan(medium: &Medium, beta: f64, n_dirs: usize) -> Result<Self> {
        let mut g = Self::around(medium, 1, n_dirs)?;
        let p = [g.center[0] + g.radius * beta.cos(), g.center[1] + g.radius * beta.sin()];
        g.rays = inward_fan(beta, n_dirs)
            .map(|theta| RayCoordinate { p, theta })
            .collect();
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Angular quadrature weight of one direction.
    pub fn dtheta(&self) -> f64 {
        PI / self.n_dirs as f64
    }

    pub fn meets_coverage_defaults(&self) -> bool {
        self.n_base >= DEFAULT_BASE_POINTS && self.n_dirs >= DEFAULT_DIRECTIONS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fans_point_inward() {
        let m = Medium::constant(1.0, 0.0, 0.75).unwrap();
        let g = XRayGeometry::default_for(&m).unwrap();
        assert_eq!(g.len(), 32 * 64);
        assert!(g.meets_coverage_defaults());
        for r in &g.rays {
            let inward = -(r.p[0] * r.theta.cos() + r.p[1] * r.theta.sin());
            assert!(inward > 0.0);
            assert!(((r.p[0].powi(2) + r.p[1].powi(2)).sqrt() - 1.25).abs() < 1e-12);
        }
    }
}
