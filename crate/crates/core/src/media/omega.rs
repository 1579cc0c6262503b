use serde::{Deserialize, Serialize};

use crate::spectral::{Grid, Mask, Point};

/// Bounded domain on which coefficients may differ from their exterior values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Omega {
    Disk { center: [f64; 2], radius: f64 },
    Rectangle { lo: [f64; 2], hi: [f64; 2] },
}

impl Default for Omega {
    fn default() -> Self {
        Self::unit_disk()
    }
}

impl Omega {
    pub fn unit_disk() -> Self {
        Self::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        }
    }

    pub fn disk(radius: f64) -> Self {
        Self::Disk {
            center: [0.0, 0.0],
            radius,
        }
    }

    /// Signed distance (negative inside). For rectangles this is exact outside and
    /// minus the distance to the nearest side inside.
    pub fn signed_distance(&self, x: Point) -> f64 {
        match self {
            Self::Disk { center, radius } => ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).sqrt() - radius,
            Self::Rectangle { lo, hi } => {
                let mut outside = 0.0f64;
                let mut inside = f64::INFINITY;
                for a in 0..2 {
                    let d = (lo[a] - x[a]).max(x[a] - hi[a]);
                    if d > 0.0 {
                        outside += d * d;
                    }
                    inside = inside.min(-d);
                }
                if outside > 0.0 {
                    outside.sqrt()
                } else {
                    -inside
                }
            }
        }
    }

    pub fn contains(&self, x: Point) -> bool {
        self.signed_distance(x) <= 0.0
    }

    pub fn dilated(&self, margin: f64) -> Self {
        match self {
            Self::Disk { center, radius } => Self::Disk {
                center: *center,
                radius: radius + margin,
            },
            Self::Rectangle { lo, hi } => Self::Rectangle {
                lo: [lo[0] - margin, lo[1] - margin],
                hi: [hi[0] + margin, hi[1] + margin],
            },
        }
    }

    pub fn center(&self) -> Point {
        match self {
            Self::Disk { center, .. } => *center,
            Self::Rectangle { lo, hi } => [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])],
        }
    }

    /// Radius of the smallest centered disk containing the domain.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Self::Disk { radius, .. } => *radius,
            Self::Rectangle { lo, hi } => 0.5 * ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt(),
        }
    }

    pub fn mask(&self, grid: &Grid) -> Mask {
        Mask::from_fn(grid, |x| self.contains(x))
    }
}
