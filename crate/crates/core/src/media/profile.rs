use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{gradient, hessian, Field, Grid, Point};

/// Value, gradient and Hessian `[d11, d12, d22]` of a scalar at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

/// Scalar coefficient of a medium.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarProfile {
    Constant {
        value: f64,
    },
    /// `scale * exp(rate * x[axis])`
    Exponential {
        scale: f64,
        rate: f64,
        axis: usize,
    },
    /// `base + amplitude * exp(-|x - center|^2 / width^2)`
    Gaussian {
        base: f64,
        amplitude: f64,
        center: [f64; 2],
        width: f64,
    },
    #[serde(skip)]
    Sampled(SampledProfile),
}

/// Grid samples with precomputed spectral derivatives, interpolated on demand.
#[derive(Clone, Debug)]
pub struct SampledProfile {
    value: Field,
    grad: [Field; 2],
    hess: [Field; 3],
}

impl SampledProfile {
    pub fn new(value: Field) -> Result<Self> {
        let grad = gradient(&value)?;
        let hess = hessian(&value)?;
        Ok(Self { value, grad, hess })
    }

    pub fn field(&self) -> &Field {
        &self.value
    }

    pub fn jet(&self, x: Point) -> Jet {
        Jet {
            value: self.value.sample(x).re,
            grad: [self.grad[0].sample(x).re, self.grad[1].sample(x).re],
            hess: [
                self.hess[0].sample(x).re,
                self.hess[1].sample(x).re,
                self.hess[2].sample(x).re,
            ],
        }
    }
}

impl ScalarProfile {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn jet(&self, x: Point) -> Jet {
        match self {
            Self::Constant { value } => Jet {
                value: *value,
                grad: [0.0; 2],
                hess: [0.0; 3],
            },
            Self::Exponential { scale, rate, axis } => {
                let v = scale * (rate * x[*axis]).exp();
                let mut grad = [0.0; 2];
                grad[*axis] = rate * v;
                let mut hess = [0.0; 3];
                hess[if *axis == 0 { 0 } else { 2 }] = rate * rate * v;
                Jet { value: v, grad, hess }
            }
            Self::Gaussian {
                base,
                amplitude,
                center,
                width,
            } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let w2 = width * width;
                let g = amplitude * (-(d[0] * d[0] + d[1] * d[1]) / w2).exp();
                let c = -2.0 / w2;
                Jet {
                    value: base + g,
                    grad: [c * d[0] * g, c * d[1] * g],
                    hess: [
                        g * (c + c * c * d[0] * d[0]),
                        g * c * c * d[0] * d[1],
                        g * (c + c * c * d[1] * d[1]),
                    ],
                }
            }
            Self::Sampled(p) => p.jet(x),
        }
    }

    pub fn value(&self, x: Point) -> f64 {
        match self {
            Self::Sampled(p) => p.value.sample(x).re,
            _ => self.jet(x).value,
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        match self {
            Self::Sampled(p) if p.value.grid() == grid => Ok(p.value.clone()),
            _ => Field::from_real_fn(grid, |x| self.value(x)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
    }

    /// Stable text used for manifest hashing.
    pub fn descriptor(&self) -> String {
        match self {
            Self::Sampled(p) => {
                let sum: f64 = p.value.values().iter().map(|v| v.re).sum();
                format!("sampled[{}; sum={sum:.17e}]", p.value.grid().descriptor())
            }
            other => serde_json::to_string(other).unwrap_or_default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(p: &ScalarProfile, x: Point) {
        let h = 1e-5;
        let j = p.jet(x);
        for a in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (p.value(xp) - p.value(xm)) / (2.0 * h);
            assert!((fd - j.grad[a]).abs() < 1e-6, "grad {a}");
            let gp = p.jet(xp).grad;
            let gm = p.jet(xm).grad;
            let d0 = (gp[0] - gm[0]) / (2.0 * h);
            let d1 = (gp[1] - gm[1]) / (2.0 * h);
            if a == 0 {
                assert!((d0 - j.hess[0]).abs() < 1e-5);
                assert!((d1 - j.hess[1]).abs() < 1e-5);
            } else {
                assert!((d1 - j.hess[2]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn analytic_jets_match_finite_differences() {
        fd_check(
            &ScalarProfile::Exponential {
                scale: 1.0,
                rate: 1.0,
                axis: 0,
            },
            [0.3, -0.2],
        );
        fd_check(
            &ScalarProfile::Gaussian {
                base: 1.0,
                amplitude: 0.2,
                center: [0.1, 0.0],
                width: 0.5,
            },
            [0.3, -0.2],
        );
    }

    #[test]
    fn sampled_profile_interpolates_a_smooth_bump() {
        let g = Grid::square(128, 8.0).unwrap();
        let exact = ScalarProfile::Gaussian {
            base: 0.0,
            amplitude: 1.0,
            center: [0.0, 0.0],
            width: 0.7,
        };
        let sampled = ScalarProfile::Sampled(SampledProfile::new(exact.sample(&g).unwrap()).unwrap());
        let x = [0.21, -0.33];
        let (a, b) = (exact.jet(x), sampled.jet(x));
        assert!((a.value - b.value).abs() < 1e-4);
        assert!((a.grad[0] - b.grad[0]).abs() < 1e-3);
        assert!((a.hess[2] - b.hess[2]).abs() < 1e-2);
    }
}
