//! Real-space evaluation of `(-Delta)^s u(x)` as a principal-value singular integral.
//!
//! The kernel is split with a smooth radial partition `w` (1 below `eps/2`, 0 above
//! `eps`). The near part uses the spherical-mean Taylor series of `u` around `x` with
//! fourth-order finite-difference Laplacians; the far part is a trapezoid sum over the
//! grid plus a radial integral of the kernel tail.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::{Field, Grid, Point};
use crate::error::{Error, Result};
use crate::smooth::smooth_plateau;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Outer radius of the near-field ball.
    pub epsilon: f64,
    /// The estimate is repeated with `epsilon * check_ratio` to detect non-convergence.
    pub check_ratio: f64,
    /// Allowed disagreement between the two estimates, relative to `max(|value|, max|u|)`.
    pub tolerance: f64,
    /// Number of Laplacian powers in the near-field series (1..=3).
    pub taylor_terms: usize,
    /// Composite Simpson intervals for the radial integrals.
    pub radial_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.25,
            check_ratio: 1.5,
            tolerance: 1e-3,
            taylor_terms: 3,
            radial_intervals: 4096,
        }
    }
}

/// `c_{n,s} = 4^s Gamma(n/2 + s) / (pi^{n/2} |Gamma(-s)|)`.
pub fn oracle_constant(n: usize, s: f64) -> f64 {
    let nf = n as f64;
    4f64.powf(s) * gamma(0.5 * nf + s) / (PI.powf(0.5 * nf) * gamma(-s).abs())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        _ => 2.0 * PI,
    }
}

/// Fourth-order periodic five-point Laplacian.
fn fd_laplacian(grid: &Grid, v: &[Complex64]) -> Vec<Complex64> {
    let sizes = grid.sizes();
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for axis in 0..grid.dim() {
        let h = grid.spacing(axis);
        let inv = 1.0 / (12.0 * h * h);
        let n = sizes[axis] as i64;
        for (k, o) in out.iter_mut().enumerate() {
            let idx = grid.multi_index(k);
            let at = |d: i64| {
                let mut j = idx;
                j[axis] = (idx[axis] as i64 + d).rem_euclid(n) as usize;
                v[grid.flat_index(j)]
            };
            *o += (-(at(-2) + at(2)) + (at(-1) + at(1)) * 16.0 - v[k] * 30.0) * inv;
        }
    }
    out
}

fn nearest_node(grid: &Grid, x: Point) -> Result<usize> {
    let mut idx = [0usize; 2];
    for axis in 0..grid.dim() {
        let u = (x[axis] - grid.origin()[axis]) / grid.spacing(axis);
        let m = u.round();
        if (u - m).abs() > 1e-9 || m < 0.0 || m >= grid.sizes()[axis] as f64 {
            return Err(Error::invalid(format!("oracle point {x:?} is not a grid node")));
        }
        idx[axis] = m as usize;
    }
    Ok(grid.flat_index(idx))
}

struct Prepared<'a> {
    u: &'a Field,
    laplacians: Vec<Vec<Complex64>>,
}

fn estimate(p: &Prepared<'_>, node: usize, s: f64, eps: f64, cfg: &QuadratureConfig) -> Complex64 {
    let grid = p.u.grid();
    let n = grid.dim();
    let nf = n as f64;
    let area = sphere_area(n);
    let w = |rho: f64| smooth_plateau(rho, 0.5 * eps, eps);
    let x = grid.point(node);

    let mut near = Complex64::new(0.0, 0.0);
    let mut denom = 1.0;
    for (k, lap) in p.laplacians.iter().enumerate() {
        let k = k + 1;
        denom *= 2.0 * k as f64 * (nf + 2.0 * (k as f64 - 1.0));
        let pw = 2.0 * k as f64 - 1.0 - 2.0 * s;
        let inner = (0.5 * eps).powf(pw + 1.0) / (pw + 1.0);
        let ramp = simpson(|r| w(r) * r.powf(pw), 0.5 * eps, eps, cfg.radial_intervals);
        near -= lap[node] * (area * (inner + ramp) / denom);
    }

    let tail = area
        * (simpson(
            |r| (1.0 - w(r)) * r.powf(-1.0 - 2.0 * s),
            0.5 * eps,
            eps,
            cfg.radial_intervals,
        ) + eps.powf(-2.0 * s) / (2.0 * s));
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &v) in p.u.values().iter().enumerate() {
        let y = grid.point(k);
        let d0 = y[0] - x[0];
        let d1 = if n == 2 { y[1] - x[1] } else { 0.0 };
        let rho = (d0 * d0 + d1 * d1).sqrt();
        if rho > 0.5 * eps {
            sum += v * ((1.0 - w(rho)) * rho.powf(-nf - 2.0 * s));
        }
    }
    let far = p.u.at(node) * tail - sum * grid.cell_volume();
    (near + far) * oracle_constant(n, s)
}

/// Singular-integral value of `(-Delta)^s u` at the grid node `x`.
///
/// `u` must have decayed to zero well before the box boundary; the sum runs over
/// the box only, so the result is the whole-space value rather than the torus one.
pub fn frac_lap_point_oracle(u: &Field, x: Point, s: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            what: "s",
            value: s,
            range: "(0, 1)",
        });
    }
    if !(1..=3).contains(&quad.taylor_terms) || !(quad.check_ratio > 0.0 && quad.check_ratio != 1.0) {
        return Err(Error::invalid("quadrature config out of range"));
    }
    let grid = u.grid();
    if !grid.contains(x, quad.epsilon * quad.check_ratio.max(1.0)) {
        return Err(Error::invalid(format!(
            "oracle point {x:?} too close to the box boundary"
        )));
    }
    let node = nearest_node(grid, x)?;
    let mut laplacians = Vec::with_capacity(quad.taylor_terms);
    let mut cur = u.values().to_vec();
    for _ in 0..quad.taylor_terms {
        cur = fd_laplacian(grid, &cur);
        laplacians.push(cur.clone());
    }
    let prepared = Prepared { u, laplacians };
    let coarse = estimate(&prepared, node, s, quad.epsilon, quad);
    let check = estimate(&prepared, node, s, quad.epsilon * quad.check_ratio, quad);
    let scale = coarse.norm().max(check.norm()).max(u.max_abs());
    if (coarse - check).norm() > quad.tolerance * scale {
        return Err(Error::QuadratureNonConvergence {
            coarse,
            fine: check,
            tolerance: quad.tolerance,
        });
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_in_one_dimension() {
        assert!((oracle_constant(1, 0.5) - 1.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn zero_field_gives_zero() {
        let g = Grid::square(64, 8.0).unwrap();
        let v = frac_lap_point_oracle(&Field::zeros(&g), [0.0, 0.0], 0.4, &Default::default()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn off_node_point_is_rejected() {
        let g = Grid::square(64, 8.0).unwrap();
        assert!(frac_lap_point_oracle(&Field::zeros(&g), [0.01, 0.0], 0.4, &Default::default()).is_err());
    }

    #[test]
    fn one_dimensional_gaussian_matches_spectral() {
        let g = Grid::line(1024, 32.0).unwrap();
        let u = Field::from_real_fn(&g, |p| (-p[0] * p[0] / 0.25).exp()).unwrap();
        let spectral = super::super::frac_laplacian(&u, 0.5).unwrap();
        let k = g.len() / 2 + 5;
        let o = frac_lap_point_oracle(&u, g.point(k), 0.5, &Default::default()).unwrap();
        assert!((o - spectral.at(k)).norm() < 2e-3 * spectral.max_abs());
    }
}
