use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{Medium, Omega};
use crate::error::{Error, Result};
use crate::spectral::Point;

/// Classical fourth-order Runge-Kutta step for an autonomous system.
pub(crate) fn rk4<const N: usize>(y: &[f64; N], dt: f64, f: &impl Fn(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let axpy = |a: &[f64; N], b: &[f64; N], c: f64| {
        let mut o = *a;
        for i in 0..N {
            o[i] += c * b[i];
        }
        o
    };
    let k1 = f(y);
    let k2 = f(&axpy(y, &k1, 0.5 * dt));
    let k3 = f(&axpy(y, &k2, 0.5 * dt));
    let k4 = f(&axpy(y, &k3, dt));
    let mut o = *y;
    for i in 0..N {
        o[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Right-hand side of `x' = xi`, `xi' = r grad r`, `phase' = r^2`.
pub(crate) fn ray_rhs(medium: &Medium, y: &[f64; 5]) -> [f64; 5] {
    let (r, g, _) = medium.ray_coefficients([y[0], y[1]]);
    [y[2], y[3], r * g[0], r * g[1], r * r]
}

/// `(x - c) . xi > 0` outside the domain: the ray is leaving for good (convex `Omega'`).
pub(crate) fn has_exited(outer: &Omega, x: Point, xi: [f64; 2]) -> bool {
    let c = outer.center();
    outer.signed_distance(x) > 0.0 && (x[0] - c[0]) * xi[0] + (x[1] - c[1]) * xi[1] > 0.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayPoint {
    pub t: f64,
    pub x: Point,
    pub xi: [f64; 2],
    pub phase: f64,
}

/// Characteristic of `|grad phi| = r` sampled at uniform parameter steps.
#[derive(Clone, Debug, Serialize)]
pub struct Ray {
    pub points: Vec<RayPoint>,
    /// Parameter at which the ray leaves `Omega'`.
    pub exit_t: f64,
}

impl Ray {
    /// Largest relative drift of `|xi|^2 - r^2` along the ray.
    pub fn hamiltonian_drift(&self, medium: &Medium) -> f64 {
        self.points
            .iter()
            .map(|p| {
                let r2 = medium.r(p.x).powi(2);
                ((p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1]) - r2).abs() / r2
            })
            .fold(0.0, f64::max)
    }

    pub fn end(&self) -> &RayPoint {
        self.points.last().expect("rays hold at least one point")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayOptions {
    pub step: f64,
    /// Parameter budget; exceeding it means the ray is trapped.
    pub budget: f64,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self {
            step: 1e-2,
            budget: 100.0,
        }
    }
}

/// Integrates the ray from `x0` with initial covector `xi0` until it leaves `Omega'`.
pub fn trace_ray(medium: &Medium, x0: Point, xi0: [f64; 2], opts: RayOptions) -> Result<Ray> {
    let r0 = medium.r(x0);
    let n0 = (xi0[0] * xi0[0] + xi0[1] * xi0[1]).sqrt();
    if (n0 - r0).abs() > 1e-10 * r0.max(1.0) {
        return Err(Error::invalid(format!("|xi0| = {n0} does not match r(x0) = {r0}")));
    }
    if !(opts.step > 0.0 && opts.budget > opts.step) {
        return Err(Error::invalid("ray step and budget must be positive"));
    }
    let outer = medium.outer();
    let mut y = [x0[0], x0[1], xi0[0], xi0[1], 0.0];
    let mut t = 0.0;
    let mut points = vec![RayPoint {
        t,
        x: x0,
        xi: xi0,
        phase: 0.0,
    }];
    let f = |y: &[f64; 5]| ray_rhs(medium, y);
    loop {
        let prev = y;
        y = rk4(&y, opts.step, &f);
        t += opts.step;
        points.push(RayPoint {
            t,
            x: [y[0], y[1]],
            xi: [y[2], y[3]],
            phase: y[4],
        });
        if has_exited(outer, [y[0], y[1]], [y[2], y[3]]) {
            let d0 = outer.signed_distance([prev[0], prev[1]]);
            let d1 = outer.signed_distance([y[0], y[1]]);
            let frac = if d0 < 0.0 { -d0 / (d1 - d0) } else { 0.0 };
            let exit_t = t - opts.step + frac * opts.step;
            return Ok(Ray { points, exit_t });
        }
        if t > opts.budget {
            return Err(Error::TrappedRay {
                start: x0,
                budget: opts.budget,
            });
        }
    }
}

/// Rays from one base point over a list of directions.
#[derive(Clone, Debug, Serialize)]
pub struct RayFan {
    pub base: Point,
    pub thetas: Vec<f64>,
    pub rays: Vec<Ray>,
}

impl RayFan {
    pub fn trace(medium: &Medium, base: Point, thetas: Vec<f64>, opts: RayOptions) -> Result<Self> {
        let r0 = medium.r(base);
        let rays = thetas
            .par_iter()
            .map(|th| trace_ray(medium, base, [r0 * th.cos(), r0 * th.sin()], opts))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { base, thetas, rays })
    }

    /// Columns `p_x,p_y,theta,t,x,y,xi_x,xi_y`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "p_x,p_y,theta,t,x,y,xi_x,xi_y")?;
        for (th, ray) in self.thetas.iter().zip(&self.rays) {
            for p in &ray.points {
                writeln!(
                    w,
                    "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                    self.base[0], self.base[1], th, p.t, p.x[0], p.x[1], p.xi[0], p.xi[1]
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_in_homogeneous_medium() {
        let m = Medium::constant(1.0, 0.0, 0.5).unwrap();
        let ray = trace_ray(&m, [-1.25, 0.0], [1.0, 0.0], RayOptions::default()).unwrap();
        assert!((ray.exit_t - 2.5).abs() < 1e-9);
        for p in &ray.points {
            assert!((p.x[0] - (-1.25 + p.t)).abs() < 1e-12);
            assert!((p.phase - p.t).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_covector_is_rejected() {
        let m = Medium::constant(2.0, 0.0, 0.5).unwrap();
        assert!(trace_ray(&m, [0.0, 0.0], [1.0, 0.0], RayOptions::default()).is_err());
    }

    #[test]
    fn slab_ray_stays_on_axis() {
        let m = Medium::exponential_slab(0.5).unwrap();
        let x0 = [-1.25, 0.0];
        let r0 = m.r(x0);
        let opts = RayOptions {
            step: 1e-3,
            budget: 100.0,
        };
        let ray = trace_ray(&m, x0, [r0, 0.0], opts).unwrap();
        assert!(ray.points.iter().all(|p| p.x[1].abs() < 1e-14));
        assert!(ray.hamiltonian_drift(&m) < 1e-8);
    }

    #[test]
    fn trapped_budget_is_reported() {
        let m = Medium::constant(1.0, 0.0, 0.5).unwrap();
        let opts = RayOptions {
            step: 0.01,
            budget: 0.5,
        };
        assert!(matches!(
            trace_ray(&m, [-1.25, 0.0], [1.0, 0.0], opts),
            Err(Error::TrappedRay { .. })
        ));
    }
}
