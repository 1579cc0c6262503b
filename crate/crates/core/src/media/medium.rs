use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Omega, ScalarProfile};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Point};

/// Refraction index `r`, potential `q` and fractional order `s` on a domain `Omega`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Medium {
    r: ScalarProfile,
    q: ScalarProfile,
    s: f64,
    omega: Omega,
    outer: Omega,
    c0: f64,
}

impl Medium {
    /// `Omega'` defaults to the disk of radius `1.25 * bounding_radius(Omega)`.
    pub fn new(r: ScalarProfile, q: ScalarProfile, s: f64, omega: Omega) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain {
                what: "s",
                value: s,
                range: "(0, 1)",
            });
        }
        let outer = Omega::Disk {
            center: omega.center(),
            radius: 1.25 * omega.bounding_radius(),
        };
        let c0 = lower_bound(&r, &outer);
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Domain {
                what: "inf r",
                value: c0,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            r,
            q,
            s,
            omega,
            outer,
            c0,
        })
    }

    pub fn constant(r: f64, q: f64, s: f64) -> Result<Self> {
        Self::new(
            ScalarProfile::constant(r),
            ScalarProfile::constant(q),
            s,
            Omega::default(),
        )
    }

    /// `r = exp(x1)`, `q = 0`.
    pub fn exponential_slab(s: f64) -> Result<Self> {
        Self::new(
            ScalarProfile::Exponential {
                scale: 1.0,
                rate: 1.0,
                axis: 0,
            },
            ScalarProfile::constant(0.0),
            s,
            Omega::default(),
        )
    }

    /// `r = 1 + beta exp(-|x|^2 / sigma^2)`, `q = 0`.
    pub fn radial(beta: f64, sigma: f64, s: f64) -> Result<Self> {
        Self::new(
            ScalarProfile::Gaussian {
                base: 1.0,
                amplitude: beta,
                center: [0.0, 0.0],
                width: sigma,
            },
            ScalarProfile::constant(0.0),
            s,
            Omega::default(),
        )
    }

    pub fn with_q(mut self, q: ScalarProfile) -> Self {
        self.q = q;
        self
    }

    pub fn with_s(self, s: f64) -> Result<Self> {
        let outer = self.outer.clone();
        Self::new(self.r, self.q, s, self.omega)?.with_outer(outer)
    }

    pub fn with_omega(self, omega: Omega) -> Result<Self> {
        Self::new(self.r, self.q, self.s, omega)
    }

    pub fn with_outer(mut self, outer: Omega) -> Result<Self> {
        self.c0 = lower_bound(&self.r, &outer);
        if !(self.c0 > 0.0) {
            return Err(Error::Domain {
                what: "inf r",
                value: self.c0,
                range: "(0, inf)",
            });
        }
        self.outer = outer;
        Ok(self)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn omega(&self) -> &Omega {
        &self.omega
    }

    pub fn outer(&self) -> &Omega {
        &self.outer
    }

    pub fn r_profile(&self) -> &ScalarProfile {
        &self.r
    }

    pub fn q_profile(&self) -> &ScalarProfile {
        &self.q
    }

    pub fn r(&self, x: Point) -> f64 {
        self.r.value(x)
    }

    pub fn q(&self, x: Point) -> f64 {
        self.q.value(x)
    }

    /// `r`, `grad r` and the Hessian of `r^2 / 2`.
    pub fn ray_coefficients(&self, x: Point) -> (f64, [f64; 2], [f64; 3]) {
        let j = self.r.jet(x);
        let (v, g, h) = (j.value, j.grad, j.hess);
        (
            v,
            g,
            [g[0] * g[0] + v * h[0], g[0] * g[1] + v * h[1], g[1] * g[1] + v * h[2]],
        )
    }

    pub fn r_field(&self, grid: &Grid) -> Result<Field> {
        self.r.sample(grid)
    }

    pub fn q_field(&self, grid: &Grid) -> Result<Field> {
        self.q.sample(grid)
    }

    pub fn has_constant_r(&self) -> bool {
        self.r.is_constant()
    }

    pub fn q_vanishes(&self) -> bool {
        matches!(self.q, ScalarProfile::Constant { value } if value == 0.0)
    }

    /// Checks `r = 1` and `q` constant on the grid points outside `Omega`.
    pub fn check_exterior(&self, grid: &Grid, tol: f64) -> Result<()> {
        let mut q_ext: Option<f64> = None;
        for x in grid.points() {
            if self.omega.contains(x) {
                continue;
            }
            let r = self.r(x);
            if (r - 1.0).abs() > tol {
                return Err(Error::Support(format!("r = {r} != 1 at exterior point {x:?}")));
            }
            let q = self.q(x);
            match q_ext {
                None => q_ext = Some(q),
                Some(q0) if (q - q0).abs() > tol => {
                    return Err(Error::Support(format!(
                        "q not constant outside Omega: {q} vs {q0} at {x:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        format!(
            "r={} q={} s={} omega={} outer={}",
            self.r.descriptor(),
            self.q.descriptor(),
            self.s,
            serde_json::to_string(&self.omega).unwrap_or_default(),
            serde_json::to_string(&self.outer).unwrap_or_default()
        )
    }
}

/// Minimum of `r` over a polar sampling of a disk containing `region`.
fn lower_bound(r: &ScalarProfile, region: &Omega) -> f64 {
    if let ScalarProfile::Constant { value } = r {
        return *value;
    }
    let c = region.center();
    let rad = region.bounding_radius();
    let mut m = r.value(c);
    for i in 1..=32 {
        let rho = rad * i as f64 / 32.0;
        for j in 0..64 {
            let th = 2.0 * PI * j as f64 / 64.0;
            m = m.min(r.value([c[0] + rho * th.cos(), c[1] + rho * th.sin()]));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_order_and_nonpositive_index() {
        assert!(Medium::constant(1.0, 0.0, 1.0).is_err());
        assert!(Medium::constant(1.0, 0.0, 0.0).is_err());
        assert!(Medium::constant(-1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn slab_violates_exterior_unity() {
        let g = Grid::square(32, 8.0).unwrap();
        let m = Medium::exponential_slab(0.5).unwrap();
        assert!(matches!(m.check_exterior(&g, 1e-8), Err(Error::Support(_))));
        assert!(Medium::constant(1.0, 2.0, 0.5)
            .unwrap()
            .check_exterior(&g, 1e-12)
            .is_ok());
        assert!((m.c0() - (-1.25f64).exp()).abs() < 1e-12);
    }
}
