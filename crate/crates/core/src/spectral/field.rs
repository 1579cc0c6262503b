use num_complex::Complex64;
use rayon::prelude::*;

use super::{Grid, Point};
use crate::error::{Error, Result};

/// Complex samples on a [`Grid`]. Every constructor rejects non-finite samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Indicator of a subset of grid points (typically Omega).
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    inside: Vec<bool>,
}

impl Mask {
    pub fn from_fn(grid: &Grid, pred: impl Fn(Point) -> bool) -> Self {
        Self {
            inside: grid.points().map(pred).collect(),
        }
    }

    pub fn full(grid: &Grid) -> Self {
        Self {
            inside: vec![true; grid.len()],
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.inside[k]
    }

    pub fn len(&self) -> usize {
        self.inside.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inside.is_empty()
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.inside.iter().enumerate().filter_map(|(k, &b)| b.then_some(k))
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.inside
    }
}

fn check_finite(values: &[Complex64], operation: &'static str) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { operation })
    }
}

impl Field {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field has {} samples, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        check_finite(&values, "Field::new")?;
        Ok(Self { grid, values })
    }

    pub(crate) fn checked(grid: Grid, values: Vec<Complex64>, operation: &'static str) -> Result<Self> {
        debug_assert_eq!(values.len(), grid.len());
        check_finite(&values, operation)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: &Grid, c: Complex64) -> Result<Self> {
        Self::new(grid.clone(), vec![c; grid.len()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(Point) -> Complex64 + Sync) -> Result<Self> {
        let values: Vec<Complex64> = (0..grid.len()).into_par_iter().map(|k| f(grid.point(k))).collect();
        Self::checked(grid.clone(), values, "Field::from_fn")
    }

    pub fn from_real_fn(grid: &Grid, f: impl Fn(Point) -> f64 + Sync) -> Result<Self> {
        Self::from_fn(grid, |p| Complex64::new(f(p), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Result<Self> {
        let values = self.values.par_iter().map(|&v| f(v)).collect();
        Self::checked(self.grid.clone(), values, "Field::map")
    }

    /// Pointwise map with access to the sample position.
    pub fn map_with_point(&self, f: impl Fn(Point, Complex64) -> Complex64 + Sync) -> Result<Self> {
        let grid = &self.grid;
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(k, &v)| f(grid.point(k), v))
            .collect();
        Self::checked(self.grid.clone(), values, "Field::map_with_point")
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64 + Sync) -> Result<Self> {
        self.same_grid(other)?;
        let values = self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::checked(self.grid.clone(), values, "Field::zip_map")
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::invalid("fields live on different grids"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Field) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        self.map(|v| v * c)
    }

    pub fn scale_real(&self, c: f64) -> Result<Self> {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_on(&self, mask: &Mask) -> f64 {
        mask.indices().map(|k| self.values[k].norm()).fold(0.0, f64::max)
    }

    /// Riemann-sum L2 norm, optionally restricted to a mask.
    pub fn norm_l2(&self, mask: Option<&Mask>) -> f64 {
        let dv = self.grid.cell_volume();
        let sum: f64 = match mask {
            Some(m) => m.indices().map(|k| self.values[k].norm_sqr()).sum(),
            None => self.values.iter().map(|v| v.norm_sqr()).sum(),
        };
        (sum * dv).sqrt()
    }

    /// `<u, v> = sum u conj(v) dV`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.same_grid(other)?;
        let dv = self.grid.cell_volume();
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * dv)
    }

    /// Zero outside the mask.
    pub fn restricted(&self, mask: &Mask) -> Self {
        let values = self
            .values
            .iter()
            .zip(mask.as_slice())
            .map(|(&v, &inside)| if inside { v } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Periodic cubic (Catmull-Rom) interpolation at an arbitrary point.
    pub fn sample(&self, x: Point) -> Complex64 {
        let g = &self.grid;
        let locate = |axis: usize| {
            let h = g.spacing(axis);
            let u = (x[axis] - g.origin()[axis]) / h;
            let i = u.floor();
            (i as i64, u - i)
        };
        let wrap = |i: i64, n: usize| i.rem_euclid(n as i64) as usize;
        match g.dim() {
            1 => {
                let (i, t) = locate(0);
                let w = catmull_rom_weights(t);
                let n = g.sizes()[0];
                (0..4).map(|a| self.values[wrap(i - 1 + a as i64, n)] * w[a]).sum()
            }
            _ => {
                let (i, tx) = locate(0);
                let (j, ty) = locate(1);
                let wx = catmull_rom_weights(tx);
                let wy = catmull_rom_weights(ty);
                let (n0, n1) = (g.sizes()[0], g.sizes()[1]);
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, wa) in wx.iter().enumerate() {
                    let row = wrap(i - 1 + a as i64, n0) * n1;
                    let r: Complex64 = wy
                        .iter()
                        .enumerate()
                        .map(|(b, wb)| self.values[row + wrap(j - 1 + b as i64, n1)] * wb)
                        .sum();
                    acc += r * wa;
                }
                acc
            }
        }
    }
}

pub(crate) fn catmull_rom_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_wrong_length() {
        let g = Grid::line(8, 1.0).unwrap();
        assert!(Field::new(g.clone(), vec![Complex64::new(0.0, 0.0); 7]).is_err());
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(Field::new(g, v), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_smooth_between() {
        let g = Grid::square(64, 4.0).unwrap();
        let f = Field::from_real_fn(&g, |p| (-(p[0] * p[0] + p[1] * p[1])).exp()).unwrap();
        let k = g.flat_index([20, 37]);
        assert!((f.sample(g.point(k)) - f.at(k)).norm() < 1e-14);
        let x: [f64; 2] = [0.3137, -0.2211];
        let exact = (-(x[0] * x[0] + x[1] * x[1])).exp();
        assert!((f.sample(x).re - exact).abs() < 1e-3);
    }

    #[test]
    fn restricted_norm_counts_only_mask() {
        let g = Grid::line(16, 16.0).unwrap();
        let f = Field::constant(&g, Complex64::new(2.0, 0.0)).unwrap();
        let m = Mask::from_fn(&g, |p| p[0].abs() < 2.5);
        // points -2..=2, spacing 1
        assert_eq!(m.count(), 5);
        assert!((f.norm_l2(Some(&m)) - (5.0f64 * 4.0).sqrt()).abs() < 1e-12);
    }
}
