use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::media::{Jet, SampledProfile};
use crate::spectral::{mollify, Field, Grid, Point};

/// Leading phase `phi_0`, analytic where possible.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phase {
    /// `speed * direction . x`
    Plane { direction: [f64; 2], speed: f64 },
    /// `speed * |x - p|`
    PointDistance { p: Point, speed: f64 },
    /// `exp(x1)`, the eikonal phase of `r = exp(x1)`.
    ExponentialSlab,
    /// Grid samples, differentiated spectrally.
    #[serde(skip)]
    Sampled(SampledProfile),
}

impl Phase {
    pub fn plane(direction: [f64; 2]) -> Self {
        Self::Plane { direction, speed: 1.0 }
    }

    /// Samples of `phi` (optionally mollified with width `mollify_width`) with spectral derivatives.
    pub fn sampled(phi: Field, mollify_width: Option<f64>) -> Result<Self> {
        let phi = match mollify_width {
            Some(w) => mollify(&phi, w)?,
            None => phi,
        };
        Ok(Self::Sampled(SampledProfile::new(phi)?))
    }

    /// Value, gradient and Hessian `[d11, d12, d22]` at `x`.
    pub fn jet(&self, x: Point) -> Jet {
        match self {
            Self::Plane { direction, speed } => Jet {
                value: speed * (direction[0] * x[0] + direction[1] * x[1]),
                grad: [speed * direction[0], speed * direction[1]],
                hess: [0.0; 3],
            },
            Self::PointDistance { p, speed } => {
                let d = [x[0] - p[0], x[1] - p[1]];
                let rho = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let c = speed / rho;
                let e = [d[0] / rho, d[1] / rho];
                Jet {
                    value: speed * rho,
                    grad: [speed * e[0], speed * e[1]],
                    hess: [c * (1.0 - e[0] * e[0]), -c * e[0] * e[1], c * (1.0 - e[1] * e[1])],
                }
            }
            Self::ExponentialSlab => {
                let v = x[0].exp();
                Jet {
                    value: v,
                    grad: [v, 0.0],
                    hess: [v, 0.0, 0.0],
                }
            }
            Self::Sampled(p) => p.jet(x),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        match self {
            Self::Sampled(p) if p.field().grid() == grid => Ok(p.field().clone()),
            _ => Field::from_real_fn(grid, |x| self.jet(x).value),
        }
    }

    pub fn is_plane(&self) -> bool {
        matches!(self, Self::Plane { .. })
    }

    pub fn descriptor(&self) -> String {
        match self {
            Self::Sampled(p) => {
                let sum: f64 = p.field().values().iter().map(|v| v.re).sum();
                format!("sampled[{};sum={sum:.12e}]", p.field().grid().descriptor())
            }
            other => serde_json::to_string(other).unwrap_or_default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_distance_hessian_annihilates_the_gradient() {
        let ph = Phase::PointDistance {
            p: [-2.0, 0.5],
            speed: 1.5,
        };
        let j = ph.jet([0.3, -0.2]);
        let n = (j.grad[0].powi(2) + j.grad[1].powi(2)).sqrt();
        assert!((n - 1.5).abs() < 1e-14);
        let hg = [
            j.hess[0] * j.grad[0] + j.hess[1] * j.grad[1],
            j.hess[1] * j.grad[0] + j.hess[2] * j.grad[1],
        ];
        assert!(hg[0].abs() < 1e-14 && hg[1].abs() < 1e-14);
    }

    #[test]
    fn sampled_plane_matches_analytic() {
        let g = Grid::square(32, 2.0 * std::f64::consts::PI).unwrap();
        let phi = Field::from_real_fn(&g, |x| x[0].sin()).unwrap();
        let ph = Phase::sampled(phi, None).unwrap();
        let x = g.point(g.flat_index([5, 7]));
        let j = ph.jet(x);
        assert!((j.grad[0] - x[0].cos()).abs() < 1e-12);
        assert!((j.hess[0] + x[0].sin()).abs() < 1e-12);
    }
}
