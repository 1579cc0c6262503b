//! Ray-lattice coordinates `(u, t)` (`u` an angle for a point base, a transverse
//! offset for a plane base) with a Newton inverse.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ray::{has_exited, rk4};
use super::{Medium, Omega};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Point};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartBase {
    /// Rays leave `p` with angles `center_angle +- half_width`.
    Point {
        p: Point,
        center_angle: f64,
        half_width: f64,
    },
    /// Rays leave the line through `origin` orthogonal to `direction`, offsets `+- half_width`.
    Plane {
        origin: Point,
        direction: [f64; 2],
        half_width: f64,
    },
}

impl ChartBase {
    fn span(&self) -> (f64, f64) {
        match self {
            Self::Point {
                center_angle,
                half_width,
                ..
            } => (center_angle - half_width, 2.0 * half_width),
            Self::Plane { half_width, .. } => (-half_width, 2.0 * half_width),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Self::Point { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartOptions {
    pub n_rays: usize,
    pub dt: f64,
    pub budget: f64,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self {
            n_rays: 257,
            dt: 1e-2,
            budget: 100.0,
        }
    }
}

/// Ray state at a lattice node: position, covector, Jacobi field `(y, p)` and phase `rho`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ChartNode {
    pub x: Point,
    pub xi: [f64; 2],
    pub y: [f64; 2],
    pub p: [f64; 2],
    pub rho: f64,
}

impl ChartNode {
    /// `xi ^ y`, the Jacobian of `(t, u) -> x`.
    pub fn jacobian(&self) -> f64 {
        self.xi[0] * self.y[1] - self.xi[1] * self.y[0]
    }

    fn to_state(self) -> [f64; 9] {
        [
            self.x[0], self.x[1], self.xi[0], self.xi[1], self.y[0], self.y[1], self.p[0], self.p[1], self.rho,
        ]
    }

    fn from_state(y: &[f64; 9]) -> Self {
        Self {
            x: [y[0], y[1]],
            xi: [y[2], y[3]],
            y: [y[4], y[5]],
            p: [y[6], y[7]],
            rho: y[8],
        }
    }
}

/// Initial node of the ray with lattice coordinate `u`.
pub(crate) fn initial_node(medium: &Medium, base: &ChartBase, u: f64) -> ChartNode {
    match base {
        ChartBase::Point { p, .. } => {
            let r0 = medium.r(*p);
            let (sn, cs) = u.sin_cos();
            ChartNode {
                x: *p,
                xi: [r0 * cs, r0 * sn],
                y: [0.0, 0.0],
                p: [-r0 * sn, r0 * cs],
                rho: 0.0,
            }
        }
        ChartBase::Plane { origin, direction, .. } => {
            let e = [-direction[1], direction[0]];
            let x = [origin[0] + u * e[0], origin[1] + u * e[1]];
            let (r0, g, _) = medium.ray_coefficients(x);
            let dr = g[0] * e[0] + g[1] * e[1];
            ChartNode {
                x,
                xi: [r0 * direction[0], r0 * direction[1]],
                y: e,
                p: [dr * direction[0], dr * direction[1]],
                rho: 0.0,
            }
        }
    }
}

fn chart_rhs(medium: &Medium, y: &[f64; 9]) -> [f64; 9] {
    let (r, g, k) = medium.ray_coefficients([y[0], y[1]]);
    [
        y[2],
        y[3],
        r * g[0],
        r * g[1],
        y[6],
        y[7],
        k[0] * y[4] + k[1] * y[5],
        k[1] * y[4] + k[2] * y[5],
        r * r,
    ]
}

/// Cubic Lagrange weights on nodes 0..4 at position `z`.
pub(crate) fn lagrange4(z: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for (j, wj) in w.iter_mut().enumerate() {
        for m in 0..4 {
            if m != j {
                *wj *= (z - m as f64) / (j as f64 - m as f64);
            }
        }
    }
    w
}

/// Tensor cubic interpolation stencil in `(u, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stencil {
    i0: usize,
    k0: usize,
    wu: [f64; 4],
    wt: [f64; 4],
}

/// Where each grid point of a region sits in the chart.
#[derive(Clone, Debug)]
pub struct ChartSampling {
    grid: Grid,
    entries: Vec<(usize, Stencil, f64, f64)>,
}

impl ChartSampling {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(flat grid index, u, t)` for every located point.
    pub fn coordinates(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.entries.iter().map(|&(k, _, u, t)| (k, u, t))
    }
}

#[derive(Clone, Debug)]
pub struct PolarChart {
    base: ChartBase,
    u0: f64,
    du: f64,
    n_rays: usize,
    dt: f64,
    n_t: usize,
    nodes: Vec<ChartNode>,
}

impl PolarChart {
    pub fn base(&self) -> &ChartBase {
        &self.base
    }

    pub fn n_rays(&self) -> usize {
        self.n_rays
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.du
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn node(&self, i: usize, k: usize) -> &ChartNode {
        &self.nodes[i * self.n_t + k]
    }

    pub fn nodes(&self) -> &[ChartNode] {
        &self.nodes
    }

    /// Jacobian normalisation: 1 for a point base, the initial Jacobian for a plane base.
    pub fn jacobian_norm(&self, i: usize) -> f64 {
        if self.base.is_point() {
            1.0
        } else {
            self.node(i, 0).jacobian()
        }
    }

    fn stencil(&self, u: f64, t: f64) -> Option<Stencil> {
        let fi = (u - self.u0) / self.du;
        let fk = t / self.dt;
        let tol = 1e-9;
        if !(fi >= -tol && fi <= (self.n_rays - 1) as f64 + tol && fk >= -tol && fk <= (self.n_t - 1) as f64 + tol) {
            return None;
        }
        let i0 = (fi.floor() as i64 - 1).clamp(0, self.n_rays as i64 - 4) as usize;
        let k0 = (fk.floor() as i64 - 1).clamp(0, self.n_t as i64 - 4) as usize;
        Some(Stencil {
            i0,
            k0,
            wu: lagrange4(fi - i0 as f64),
            wt: lagrange4(fk - k0 as f64),
        })
    }

    /// Weighted sum of a per-node quantity.
    pub(crate) fn combine<T>(&self, st: &Stencil, f: impl Fn(usize) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    {
        let mut acc = T::default();
        for a in 0..4 {
            let mut row = T::default();
            let base = (st.i0 + a) * self.n_t + st.k0;
            for b in 0..4 {
                row = row + f(base + b) * st.wt[b];
            }
            acc = acc + row * st.wu[a];
        }
        acc
    }

    fn interp_node(&self, st: &Stencil) -> ChartNode {
        let c = |g: &dyn Fn(&ChartNode) -> f64| self.combine(st, |n| g(&self.nodes[n]));
        ChartNode {
            x: [c(&|n| n.x[0]), c(&|n| n.x[1])],
            xi: [c(&|n| n.xi[0]), c(&|n| n.xi[1])],
            y: [c(&|n| n.y[0]), c(&|n| n.y[1])],
            p: [c(&|n| n.p[0]), c(&|n| n.p[1])],
            rho: c(&|n| n.rho),
        }
    }

    /// Interpolated ray state at `(u, t)`.
    pub fn state_at(&self, u: f64, t: f64) -> Option<ChartNode> {
        self.stencil(u, t).map(|st| self.interp_node(&st))
    }

    pub fn forward(&self, u: f64, t: f64) -> Option<Point> {
        self.state_at(u, t).map(|n| n.x)
    }

    fn initial_guess(&self, x: Point) -> (f64, f64) {
        let u = match &self.base {
            ChartBase::Point { p, .. } => (x[1] - p[1]).atan2(x[0] - p[0]),
            ChartBase::Plane { origin, direction, .. } => {
                (x[0] - origin[0]) * -direction[1] + (x[1] - origin[1]) * direction[0]
            }
        };
        let i = (((u - self.u0) / self.du).round().max(0.0) as usize).min(self.n_rays - 1);
        let mut best = (f64::INFINITY, 0);
        for k in 0..self.n_t {
            let y = self.node(i, k).x;
            let d = (y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2);
            if d < best.0 {
                best = (d, k);
            }
        }
        (self.u(i), self.t(best.1))
    }

    /// Lattice coordinates `(u, t)` of `x`, if covered.
    pub fn inverse(&self, x: Point) -> Option<(f64, f64)> {
        let (mut u, mut t) = self.initial_guess(x);
        let scale = 1.0 + x[0].abs() + x[1].abs();
        let (umin, umax) = (self.u0, self.u(self.n_rays - 1));
        let tmax = self.t(self.n_t - 1);
        for _ in 0..60 {
            let st = self.stencil(u, t)?;
            let n = self.interp_node(&st);
            let r = [x[0] - n.x[0], x[1] - n.x[1]];
            if r[0].abs() + r[1].abs() < 1e-13 * scale {
                return Some((u, t));
            }
            let det = n.jacobian();
            if det.abs() < 1e-300 {
                return None;
            }
            let dt = (r[0] * n.y[1] - r[1] * n.y[0]) / det;
            let du = (n.xi[0] * r[1] - n.xi[1] * r[0]) / det;
            u = (u + du).clamp(umin, umax);
            t = (t + dt).clamp(0.0, tmax);
        }
        let n = self.state_at(u, t)?;
        let miss = (x[0] - n.x[0]).abs() + (x[1] - n.x[1]).abs();
        (miss < 1e-10 * scale).then_some((u, t))
    }

    /// Locates every grid point of `region` and checks the Jacobian there.
    pub fn locate(&self, grid: &Grid, region: &Omega) -> Result<ChartSampling> {
        for i in 0..self.n_rays {
            for k in 1..self.n_t {
                let n = self.node(i, k);
                if region.contains(n.x) && n.jacobian() <= 0.0 {
                    return Err(Error::NotSimple {
                        ray: i,
                        node: k,
                        jacobian: n.jacobian(),
                    });
                }
            }
        }
        let mask = region.mask(grid);
        let idx: Vec<usize> = mask.indices().collect();
        let entries = idx
            .par_iter()
            .map(|&k| {
                let x = grid.point(k);
                let gap = || Error::CoverageGap {
                    cell: grid.multi_index(k)[..grid.dim()].to_vec(),
                    point: x,
                };
                let (u, t) = self.inverse(x).ok_or_else(gap)?;
                let st = self.stencil(u, t).ok_or_else(gap)?;
                Ok((k, st, u, t))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChartSampling {
            grid: grid.clone(),
            entries,
        })
    }

    /// Interpolates a per-node channel onto the located grid points (zero elsewhere).
    pub fn resample(&self, sampling: &ChartSampling, channel: &[Complex64]) -> Result<Field> {
        if channel.len() != self.nodes.len() {
            return Err(Error::invalid("channel length differs from the node count"));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); sampling.grid.len()];
        for (k, st, _, _) in &sampling.entries {
            values[*k] = self.combine(st, |n| channel[n]);
        }
        Field::new(sampling.grid.clone(), values)
    }

    /// Interpolated forward map at each located point; used for round-trip checks.
    pub fn round_trip_error(&self, sampling: &ChartSampling) -> f64 {
        sampling
            .entries
            .iter()
            .map(|&(k, _, u, t)| {
                let x = sampling.grid.point(k);
                match self.forward(u, t) {
                    Some(y) => ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt(),
                    None => f64::INFINITY,
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Traces the ray lattice of `base` through `Omega'`.
pub fn build_polar_chart(medium: &Medium, base: ChartBase, opts: ChartOptions) -> Result<PolarChart> {
    if opts.n_rays < 4 || !(opts.dt > 0.0) {
        return Err(Error::invalid("chart needs at least 4 rays and a positive step"));
    }
    match &base {
        ChartBase::Point { p, half_width, .. } => {
            if medium.omega().contains(*p) {
                return Err(Error::invalid("chart base point lies inside Omega"));
            }
            if !(*half_width > 0.0 && *half_width < std::f64::consts::PI) {
                return Err(Error::invalid("fan half width must lie in (0, pi)"));
            }
        }
        ChartBase::Plane {
            direction, half_width, ..
        } => {
            let n = (direction[0].powi(2) + direction[1].powi(2)).sqrt();
            if (n - 1.0).abs() > 1e-12 || !(*half_width > 0.0) {
                return Err(Error::invalid("plane base needs a unit direction and positive width"));
            }
        }
    }
    let (u0, width) = base.span();
    let du = width / (opts.n_rays - 1) as f64;
    let f = |y: &[f64; 9]| chart_rhs(medium, y);
    let outer = medium.outer();

    let first: Vec<(Vec<ChartNode>, [f64; 9])> = (0..opts.n_rays)
        .into_par_iter()
        .map(|i| {
            let n0 = initial_node(medium, &base, u0 + i as f64 * du);
            let mut y = n0.to_state();
            let mut nodes = vec![n0];
            let mut t = 0.0;
            loop {
                y = rk4(&y, opts.dt, &f);
                t += opts.dt;
                nodes.push(ChartNode::from_state(&y));
                if has_exited(outer, [y[0], y[1]], [y[2], y[3]]) {
                    return Ok((nodes, y));
                }
                if t > opts.budget {
                    return Err(Error::TrappedRay {
                        start: n0.x,
                        budget: opts.budget,
                    });
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let n_t = first.iter().map(|(n, _)| n.len()).max().unwrap_or(0) + 4;
    let rays: Vec<Vec<ChartNode>> = first
        .into_par_iter()
        .map(|(mut nodes, mut y)| {
            while nodes.len() < n_t {
                y = rk4(&y, opts.dt, &f);
                nodes.push(ChartNode::from_state(&y));
            }
            nodes
        })
        .collect();
    Ok(PolarChart {
        base,
        u0,
        du,
        n_rays: opts.n_rays,
        dt: opts.dt,
        n_t,
        nodes: rays.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_point_chart_is_polar() {
        let m = Medium::constant(1.0, 0.0, 0.5).unwrap();
        let p = [-1.25, 0.0];
        let chart = build_polar_chart(
            &m,
            ChartBase::Point {
                p,
                center_angle: 0.0,
                half_width: 1.2,
            },
            ChartOptions {
                n_rays: 129,
                dt: 0.02,
                budget: 10.0,
            },
        )
        .unwrap();
        let x = [0.3, 0.4];
        let (u, t) = chart.inverse(x).unwrap();
        let rho = ((x[0] - p[0]).powi(2) + x[1] * x[1]).sqrt();
        assert!((t - rho).abs() < 1e-8);
        assert!((u - (x[1]).atan2(x[0] - p[0])).abs() < 1e-8);
        let n = chart.state_at(u, t).unwrap();
        assert!((n.rho - rho).abs() < 1e-8);
        assert!((n.jacobian() - rho).abs() < 1e-8);
    }

    #[test]
    fn uncovered_point_is_a_gap() {
        let m = Medium::constant(1.0, 0.0, 0.5).unwrap();
        let chart = build_polar_chart(
            &m,
            ChartBase::Point {
                p: [-1.25, 0.0],
                center_angle: 0.0,
                half_width: 0.2,
            },
            ChartOptions {
                n_rays: 16,
                dt: 0.05,
                budget: 10.0,
            },
        )
        .unwrap();
        let g = Grid::square(32, 4.0).unwrap();
        assert!(matches!(
            chart.locate(&g, &Omega::unit_disk()),
            Err(Error::CoverageGap { .. })
        ));
    }
}
