use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smooth::smooth_plateau;

/// Amplitude `b` prescribed at the chart base as a function of the ray coordinate `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryAmplitude {
    /// `scale` on every ray.
    Constant { scale: f64 },
    /// `scale * exp(-d^2 / width^2)` cut off smoothly between `3 width` and `4 width`, where
    /// `d = u - center` (wrapped to `(-pi, pi]` when `periodic`).
    Gaussian {
        center: f64,
        width: f64,
        scale: f64,
        periodic: bool,
    },
}

impl BoundaryAmplitude {
    /// Bump on the angle circle.
    pub fn angular(center: f64, width: f64) -> Self {
        Self::Gaussian {
            center,
            width,
            scale: 1.0,
            periodic: true,
        }
    }

    /// Bump in the transverse offset of a plane base.
    pub fn transverse(width: f64) -> Self {
        Self::Gaussian {
            center: 0.0,
            width,
            scale: 1.0,
            periodic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { scale } if *scale >= 0.0 && scale.is_finite() => Ok(()),
            Self::Gaussian {
                width, scale, periodic, ..
            } if *width > 0.0 && *scale >= 0.0 && scale.is_finite() && (!periodic || 4.0 * width < PI) => Ok(()),
            _ => Err(Error::invalid(format!("invalid boundary amplitude {self:?}"))),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Self::Constant { scale } => *scale,
            Self::Gaussian {
                center,
                width,
                scale,
                periodic,
            } => {
                let mut d = u - center;
                if *periodic {
                    d = (d + PI).rem_euclid(2.0 * PI) - PI;
                }
                let z = d / width;
                scale * (-z * z).exp() * smooth_plateau(z.abs(), 3.0, 4.0)
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match self.clone() {
            Self::Constant { scale } => Self::Constant { scale: c * scale },
            Self::Gaussian {
                center,
                width,
                scale,
                periodic,
            } => Self::Gaussian {
                center,
                width,
                scale: c * scale,
                periodic,
            },
        }
    }
}
