use num_complex::Complex64;
use rayon::prelude::*;

use super::data::XRayData;
use super::geometry::{RayCoordinate, XRayGeometry};
use crate::error::{Error, Result};
use crate::media::{trace_ray, Medium, Ray, RayOptions};
use crate::spectral::{Field, Grid, Point};

/// Quadrature nodes `(x, w)` of `int f drho` along a traced ray, `drho = r^2 dt`, cut at the exit.
fn ray_nodes(medium: &Medium, ray: &Ray) -> Vec<(Point, f64)> {
    let pts = &ray.points;
    let mut out = Vec::with_capacity(pts.len());
    for k in 0..pts.len() {
        let t = pts[k].t;
        if t > ray.exit_t {
            break;
        }
        let lo = if k > 0 { pts[k - 1].t } else { t };
        let hi = if k + 1 < pts.len() {
            pts[k + 1].t.min(ray.exit_t)
        } else {
            t
        };
        let r = medium.r(pts[k].x);
        out.push((pts[k].x, 0.5 * (hi - lo) * r * r));
    }
    out
}

fn trace(medium: &Medium, c: &RayCoordinate, step: f64) -> Result<Ray> {
    let r0 = medium.r(c.p);
    trace_ray(
        medium,
        c.p,
        [r0 * c.theta.cos(), r0 * c.theta.sin()],
        RayOptions { step, budget: 1e3 },
    )
}

fn bilinear(grid: &Grid, x: Point) -> [(usize, f64); 4] {
    let (n0, n1) = (grid.sizes()[0], grid.sizes()[1]);
    let u = (x[0] - grid.origin()[0]) / grid.spacing(0);
    let v = (x[1] - grid.origin()[1]) / grid.spacing(1);
    let (i, j) = (u.floor(), v.floor());
    let (a, b) = (u - i, v - j);
    let wrap = |k: f64, n: usize| (k as i64).rem_euclid(n as i64) as usize;
    let (i0, i1, j0, j1) = (wrap(i, n0), wrap(i + 1.0, n0), wrap(j, n1), wrap(j + 1.0, n1));
    [
        (i0 * n1 + j0, (1.0 - a) * (1.0 - b)),
        (i0 * n1 + j1, (1.0 - a) * b),
        (i1 * n1 + j0, a * (1.0 - b)),
        (i1 * n1 + j1, a * b),
    ]
}

/// Sparse matrix of the discrete ray transform: bilinear footprints of the quadrature nodes of
/// every ray. Its transpose is the exact adjoint for the plain Euclidean inner products on data
/// and grid values.
#[derive(Clone, Debug)]
pub struct RayOperator {
    grid: Grid,
    geometry: XRayGeometry,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl RayOperator {
    /// Rays are integrated with parameter step `step` (default: half the grid spacing over sup r).
    pub fn new(medium: &Medium, grid: &Grid, geometry: &XRayGeometry, step: Option<f64>) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::invalid("ray transforms need a 2-D grid"));
        }
        let c = geometry.center;
        let reach = geometry.radius;
        if !grid.contains([c[0] - reach, c[1] - reach], 0.0) || !grid.contains([c[0] + reach, c[1] + reach], 0.0) {
            return Err(Error::Support(format!(
                "Omega' of radius {reach} does not fit in {}",
                grid.descriptor()
            )));
        }
        let rmax = medium.r_field(grid)?.max_abs();
        let step = step.unwrap_or(0.5 * grid.max_spacing() / rmax);
        let rows: Vec<Vec<(usize, f64)>> = geometry
            .rays
            .par_iter()
            .map(|rc| {
                let ray = trace(medium, rc, step)?;
                let mut row: Vec<(usize, f64)> = ray_nodes(medium, &ray)
                    .into_iter()
                    .flat_map(|(x, w)| bilinear(grid, x).map(|(k, b)| (k, w * b)))
                    .filter(|e| e.1 != 0.0)
                    .collect();
                row.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
                for (k, w) in row {
                    match merged.last_mut() {
                        Some(last) if last.0 == k => last.1 += w,
                        _ => merged.push((k, w)),
                    }
                }
                Ok(merged)
            })
            .collect::<Result<_>>()?;
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in rows {
            for (k, w) in row {
                cols.push(k);
                vals.push(w);
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            grid: grid.clone(),
            geometry: geometry.clone(),
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn geometry(&self) -> &XRayGeometry {
        &self.geometry
    }

    pub fn n_rays(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply(&self, q: &Field) -> Result<Vec<Complex64>> {
        if q.grid() != &self.grid {
            return Err(Error::invalid("field lives on a different grid than the ray operator"));
        }
        let v = q.values();
        Ok((0..self.n_rays())
            .into_par_iter()
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|e| v[self.cols[e]] * self.vals[e])
                    .sum()
            })
            .collect())
    }

    pub fn adjoint(&self, data: &[Complex64]) -> Result<Field> {
        if data.len() != self.n_rays() {
            return Err(Error::invalid("data length differs from the ray count"));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (i, d) in data.iter().enumerate() {
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.cols[e]] += d * self.vals[e];
            }
        }
        Field::new(self.grid.clone(), out)
    }

    /// Largest singular value by power iteration on `I* I`.
    pub fn norm_estimate(&self, iterations: usize) -> Result<f64> {
        let mut x = Field::constant(&self.grid, Complex64::new(1.0, 0.0))?;
        let mut sigma2 = 0.0;
        for _ in 0..iterations.max(1) {
            let n = x.norm_l2(None) / self.grid.cell_volume().sqrt();
            x = x.scale_real(1.0 / n)?;
            let y = self.adjoint(&self.apply(&x)?)?;
            sigma2 = y.norm_l2(None) / self.grid.cell_volume().sqrt();
            x = y;
        }
        Ok(sigma2.sqrt())
    }
}

/// `IQ` on the rays of `geometry` through the discrete operator.
pub fn ray_transform(medium: &Medium, q: &Field, geometry: &XRayGeometry) -> Result<XRayData> {
    let op = RayOperator::new(medium, q.grid(), geometry, None)?;
    Ok(XRayData::clean(geometry, op.apply(q)?))
}

/// `IQ` for an analytic integrand, integrated with parameter step `step`.
pub fn ray_transform_fn(
    medium: &Medium,
    f: impl Fn(Point) -> Complex64 + Sync,
    geometry: &XRayGeometry,
    step: f64,
) -> Result<XRayData> {
    let values = geometry
        .rays
        .par_iter()
        .map(|rc| {
            let ray = trace(medium, rc, step)?;
            Ok(ray_nodes(medium, &ray).into_iter().map(|(x, w)| f(x) * w).sum())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(XRayData::clean(geometry, values))
}
