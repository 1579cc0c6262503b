use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-dimensional point; one-dimensional grids use `[x, 0.0]`.
pub type Point = [f64; 2];

/// Periodic rectangular sampling of a box in R^n, n in {1, 2}.
///
/// Samples sit at `origin[i] + m * L_i / sizes[i]` for `m = 0..sizes[i]`, stored
/// row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    sizes: Vec<usize>,
    periods: Vec<f64>,
    origin: Vec<f64>,
}

impl Grid {
    pub fn new(sizes: Vec<usize>, periods: Vec<f64>, origin: Vec<f64>) -> Result<Self> {
        let n = sizes.len();
        if !(1..=2).contains(&n) {
            return Err(Error::invalid(format!("grid dimension {n} not in {{1, 2}}")));
        }
        if periods.len() != n || origin.len() != n {
            return Err(Error::invalid("sizes, periods and origin must have equal length"));
        }
        for (&size, &period) in sizes.iter().zip(&periods) {
            if size < 8 || !size.is_power_of_two() {
                return Err(Error::invalid(format!("axis size {size} must be a power of two >= 8")));
            }
            if !(period.is_finite() && period > 0.0) {
                return Err(Error::invalid(format!("period {period} must be positive")));
            }
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::invalid("origin must be finite"));
        }
        Ok(Self { sizes, periods, origin })
    }

    /// Box `[-L_i/2, L_i/2)` on every axis.
    pub fn centered(sizes: Vec<usize>, periods: Vec<f64>) -> Result<Self> {
        let origin = periods.iter().map(|l| -0.5 * l).collect();
        Self::new(sizes, periods, origin)
    }

    pub fn square(size: usize, period: f64) -> Result<Self> {
        Self::centered(vec![size, size], vec![period, period])
    }

    pub fn line(size: usize, period: f64) -> Result<Self> {
        Self::centered(vec![size], vec![period])
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.periods[axis] / self.sizes[axis] as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn coordinate(&self, axis: usize, m: usize) -> f64 {
        self.origin[axis] + m as f64 * self.spacing(axis)
    }

    pub fn coordinates(&self, axis: usize) -> Vec<f64> {
        (0..self.sizes[axis]).map(|m| self.coordinate(axis, m)).collect()
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 2] {
        match self.dim() {
            1 => [flat, 0],
            _ => [flat / self.sizes[1], flat % self.sizes[1]],
        }
    }

    pub fn flat_index(&self, idx: [usize; 2]) -> usize {
        match self.dim() {
            1 => idx[0],
            _ => idx[0] * self.sizes[1] + idx[1],
        }
    }

    pub fn point(&self, flat: usize) -> Point {
        let [i, j] = self.multi_index(flat);
        match self.dim() {
            1 => [self.coordinate(0, i), 0.0],
            _ => [self.coordinate(0, i), self.coordinate(1, j)],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Angular wavenumbers `2 pi m / L` in FFT storage order, m in [-N/2, N/2).
    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        let n = self.sizes[axis] as i64;
        let scale = 2.0 * PI / self.periods[axis];
        (0..n)
            .map(|m| {
                let signed = if m < n / 2 { m } else { m - n };
                signed as f64 * scale
            })
            .collect()
    }

    /// Index in FFT storage order of the signed mode `m`.
    pub fn mode_slot(&self, axis: usize, m: i64) -> Option<usize> {
        let n = self.sizes[axis] as i64;
        if m < -n / 2 || m >= n / 2 {
            return None;
        }
        Some(if m >= 0 { m as usize } else { (m + n) as usize })
    }

    pub fn nyquist(&self, axis: usize) -> f64 {
        PI * self.sizes[axis] as f64 / self.periods[axis]
    }

    /// Same box, every axis size multiplied by `factor` (a power of two).
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.sizes.iter().map(|s| s * factor).collect(),
            self.periods.clone(),
            self.origin.clone(),
        )
    }

    pub fn with_sizes(&self, sizes: Vec<usize>) -> Result<Self> {
        Self::new(sizes, self.periods.clone(), self.origin.clone())
    }

    /// Whether `x` lies strictly inside the box with a margin.
    pub fn contains(&self, x: Point, margin: f64) -> bool {
        (0..self.dim()).all(|a| x[a] > self.origin[a] + margin && x[a] < self.origin[a] + self.periods[a] - margin)
    }

    /// Smallest power of two (>= 8) resolving wavenumber `k` with `ppw` points per wavelength.
    pub fn size_for_wavenumber(period: f64, k: f64, ppw: f64) -> usize {
        let needed = (period / (2.0 * PI) * k * ppw).ceil().max(8.0) as usize;
        needed.next_power_of_two()
    }

    /// Stable textual descriptor used in manifests.
    pub fn descriptor(&self) -> String {
        format!(
            "n={} sizes={:?} periods={:?} origin={:?}",
            self.dim(),
            self.sizes,
            self.periods,
            self.origin
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::line(12, 1.0).is_err());
        assert!(Grid::line(4, 1.0).is_err());
        assert!(Grid::line(16, 0.0).is_err());
        assert!(Grid::new(vec![8, 8, 8], vec![1.0; 3], vec![0.0; 3]).is_err());
    }

    #[test]
    fn frequency_set_matches_fft_order() {
        let g = Grid::line(8, 2.0 * PI).unwrap();
        let k = g.wavenumbers(0);
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.mode_slot(0, -4), Some(4));
        assert_eq!(g.mode_slot(0, 4), None);
    }

    #[test]
    fn flat_and_multi_index_agree() {
        let g = Grid::centered(vec![8, 16], vec![1.0, 2.0]).unwrap();
        for k in 0..g.len() {
            assert_eq!(g.flat_index(g.multi_index(k)), k);
        }
        assert_eq!(g.point(0), [-0.5, -1.0]);
        assert!((g.spacing(1) - 0.125).abs() < 1e-15);
    }
}
