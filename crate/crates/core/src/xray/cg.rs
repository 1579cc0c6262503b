use num_complex::Complex64;
use serde::Serialize;

use super::data::XRayData;
use super::operator::RayOperator;
use crate::error::{Error, Result};
use crate::media::Medium;
use crate::spectral::{Field, Grid, Mask};

#[derive(Clone, Debug, Serialize)]
pub struct CgReport {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn masked(v: Vec<Complex64>, mask: &Mask) -> Vec<Complex64> {
    v.into_iter()
        .enumerate()
        .map(|(k, x)| if mask.contains(k) { x } else { Complex64::new(0.0, 0.0) })
        .collect()
}

impl RayOperator {
    /// Conjugate gradient on `(P I* I P + lambda) x = P I* data`, with `P` the restriction to
    /// `support`. Stops after `iterations` steps or at relative residual `1e-12`.
    pub fn invert(&self, data: &XRayData, support: &Mask, iterations: usize, lambda: f64) -> Result<(Field, CgReport)> {
        data.validate()?;
        if !(lambda >= 0.0) {
            return Err(Error::invalid("regularization must be non-negative"));
        }
        let grid = self.grid().clone();
        let normal = |x: &[Complex64]| -> Result<Vec<Complex64>> {
            let f = Field::new(grid.clone(), x.to_vec())?;
            let y = self.adjoint(&self.apply(&f)?)?.into_values();
            Ok(masked(y, support)
                .into_iter()
                .zip(x)
                .map(|(a, b)| a + lambda * b)
                .collect())
        };
        let rhs = masked(self.adjoint(&data.values)?.into_values(), support);
        let b_norm = dot(&rhs, &rhs).re.sqrt();
        let mut x = vec![Complex64::new(0.0, 0.0); grid.len()];
        if b_norm == 0.0 {
            return Ok((
                Field::new(grid, x)?,
                CgReport {
                    iterations: 0,
                    relative_residual: 0.0,
                },
            ));
        }
        let mut r = rhs.clone();
        let mut p = r.clone();
        let mut rr = dot(&r, &r).re;
        let mut done = 0;
        for it in 0..iterations {
            let ap = normal(&p)?;
            let curvature = dot(&p, &ap).re;
            if !(curvature > 0.0) || !curvature.is_finite() {
                return Err(Error::CgBreakdown {
                    iteration: it,
                    curvature,
                });
            }
            let alpha = rr / curvature;
            for k in 0..x.len() {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            let rr_new = dot(&r, &r).re;
            done = it + 1;
            if rr_new.sqrt() <= 1e-12 * b_norm {
                rr = rr_new;
                break;
            }
            let beta = rr_new / rr;
            for k in 0..p.len() {
                p[k] = r[k] + beta * p[k];
            }
            rr = rr_new;
        }
        Ok((
            Field::new(grid, x)?,
            CgReport {
                iterations: done,
                relative_residual: rr.sqrt() / b_norm,
            },
        ))
    }
}

/// Regularized least-squares reconstruction of `Q` on `Omega` from ray data.
pub fn invert_cg(data: &XRayData, medium: &Medium, grid: &Grid, iterations: usize, lambda: f64) -> Result<Field> {
    if !data.geometry.meets_coverage_defaults() {
        return Err(Error::invalid(format!(
            "ray geometry {} x {} is below the coverage defaults",
            data.geometry.n_base, data.geometry.n_dirs
        )));
    }
    let op = RayOperator::new(medium, grid, &data.geometry, None)?;
    let support = medium.omega().mask(grid);
    Ok(op.invert(data, &support, iterations, lambda)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xray::{ray_transform_fn, XRayGeometry};

    fn phantom(x: [f64; 2]) -> f64 {
        crate::xray::Phantom::default().eval(x)
    }

    #[test]
    fn recovers_gaussian_phantom() {
        let m = Medium::constant(1.0, 0.0, 0.75).unwrap();
        let grid = Grid::square(64, 2.8).unwrap();
        let geo = XRayGeometry::around(&m, 64, 128).unwrap();
        let data = ray_transform_fn(&m, |x| Complex64::new(phantom(x), 0.0), &geo, 5e-3).unwrap();
        let q = invert_cg(&data, &m, &grid, 200, 1e-6).unwrap();
        let mask = m.omega().mask(&grid);
        let truth = Field::from_real_fn(&grid, phantom).unwrap().restricted(&mask);
        let err = q.sub(&truth).unwrap().norm_l2(Some(&mask)) / truth.norm_l2(Some(&mask));
        assert!(err <= 0.05, "{err}");

        let q2 = invert_cg(&data.scaled(3.0), &m, &grid, 200, 1e-6).unwrap();
        let lin = q2.sub(&q.scale_real(3.0).unwrap()).unwrap().norm_l2(None) / q2.norm_l2(None);
        assert!(lin < 1e-8, "{lin}");
    }

    #[test]
    fn coverage_is_enforced() {
        let m = Medium::constant(1.0, 0.0, 0.75).unwrap();
        let geo = XRayGeometry::around(&m, 8, 8).unwrap();
        let data = XRayData::clean(&geo, vec![Complex64::new(0.0, 0.0); geo.len()]);
        assert!(invert_cg(&data, &m, &Grid::square(32, 2.8).unwrap(), 10, 0.0).is_err());
    }
}
