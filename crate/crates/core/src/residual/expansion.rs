use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::{fit_log2_slope, SlopeFit};
use crate::ansatz::POINTS_PER_WAVELENGTH;
use crate::error::{Error, Result};
use crate::media::Medium;
use crate::spectral::{frac_laplacian, Field, Grid};
use crate::transport::{apply_l10, check_nondegenerate, Phase};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub s: f64,
    pub taus: Vec<f64>,
    /// `|| e^{-i tau phi} (-Delta)^s (e^{i tau phi} a) - tau^{2s} |grad phi|^{2s} a ||_{L^2(Omega)}`
    pub d0: Vec<f64>,
    /// `d0` with `tau^{2s-1} L_{1;0} a` also removed.
    pub d1: Vec<f64>,
    pub fit_d0: SlopeFit,
    pub fit_d1: SlopeFit,
    pub expected_d0: f64,
    pub expected_d1: f64,
}

/// Measures how much of `e^{-i tau phi} (-Delta)^s e^{i tau phi} a` the first two terms of its
/// expansion account for.
pub fn expansion_order_check(phase: &Phase, a: &Field, medium: &Medium, taus: &[f64]) -> Result<ExpansionReport> {
    if taus.len() < 2 {
        return Err(Error::invalid("expansion check needs at least two frequencies"));
    }
    let grid = a.grid().clone();
    check_nondegenerate(phase, medium, &grid)?;
    let s = medium.s();
    let phi = phase.sample(&grid)?;
    let grad: Vec<[f64; 2]> = (0..grid.len()).map(|k| phase.jet(grid.point(k)).grad).collect();
    let floor = 1e-14 * a.max_abs();
    let mut bound = [0.0f64; 2];
    for (k, g) in grad.iter().enumerate() {
        if a.at(k).norm() > floor {
            bound[0] = bound[0].max(g[0].abs());
            bound[1] = bound[1].max(g[1].abs());
        }
    }
    let l10 = apply_l10(phase, medium, a)?;
    let mask = medium.omega().mask(&grid);
    let mut d0 = Vec::with_capacity(taus.len());
    let mut d1 = Vec::with_capacity(taus.len());
    for &tau in taus {
        let required: Vec<usize> = (0..2)
            .map(|i| Grid::size_for_wavenumber(grid.periods()[i], tau * bound[i], POINTS_PER_WAVELENGTH))
            .collect();
        if grid.sizes().iter().zip(&required).any(|(h, r)| h < r) {
            return Err(Error::Resolution {
                tau,
                have: grid.sizes().to_vec(),
                required,
            });
        }
        let w = a.zip_map(&phi, |av, p| av * Complex64::from_polar(1.0, tau * p.re))?;
        let lap = frac_laplacian(&w, s)?;
        let t2s = tau.powf(2.0 * s);
        let t1 = tau.powf(2.0 * s - 1.0);
        let e0: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let n2 = grad[k][0] * grad[k][0] + grad[k][1] * grad[k][1];
                Complex64::from_polar(1.0, -tau * phi.at(k).re) * lap.at(k) - t2s * n2.powf(s) * a.at(k)
            })
            .collect();
        let e0 = Field::new(grid.clone(), e0)?;
        let e1 = e0.sub(&l10.scale_real(t1)?)?;
        d0.push(e0.norm_l2(Some(&mask)));
        d1.push(e1.norm_l2(Some(&mask)));
    }
    Ok(ExpansionReport {
        s,
        taus: taus.to_vec(),
        fit_d0: fit_log2_slope(taus, &d0)?,
        fit_d1: fit_log2_slope(taus, &d1)?,
        d0,
        d1,
        expected_d0: 2.0 * s - 1.0,
        expected_d1: 2.0 * s - 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(g: &Grid) -> Field {
        Field::from_real_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1]) / 0.3).exp()).unwrap()
    }

    fn run(s: f64) -> ExpansionReport {
        let g = Grid::new(vec![2048, 64], vec![8.0, 8.0], vec![-4.0, -4.0]).unwrap();
        let m = Medium::constant(1.0, 0.0, s).unwrap();
        expansion_order_check(&Phase::plane([1.0, 0.0]), &gaussian(&g), &m, &[16.0, 32.0, 64.0, 128.0]).unwrap()
    }

    #[test]
    fn orders_at_one_half() {
        let r = run(0.5);
        assert!(r.fit_d0.slope.abs() < 0.2, "{:?}", r.fit_d0);
        assert!((r.fit_d1.slope + 1.0).abs() < 0.2, "{:?}", r.fit_d1);
    }

    #[test]
    fn orders_at_three_tenths() {
        let r = run(0.3);
        assert!((r.fit_d0.slope + 0.4).abs() < 0.2, "{:?}", r.fit_d0);
        assert!((r.fit_d1.slope + 1.4).abs() < 0.2, "{:?}", r.fit_d1);
    }

    #[test]
    fn orders_at_three_quarters() {
        let r = run(0.75);
        assert!((r.fit_d0.slope - 0.5).abs() < 0.2, "{:?}", r.fit_d0);
        assert!((r.fit_d1.slope + 0.5).abs() < 0.2, "{:?}", r.fit_d1);
    }

    #[test]
    fn transported_amplitude_has_no_first_order_term() {
        let g = Grid::new(vec![1024, 64], vec![8.0, 8.0], vec![-4.0, -4.0]).unwrap();
        let m = Medium::constant(1.0, 0.0, 0.6).unwrap();
        let a = Field::from_real_fn(&g, |x| (-x[1] * x[1] / 0.3).exp()).unwrap();
        let r = expansion_order_check(&Phase::plane([1.0, 0.0]), &a, &m, &[16.0, 32.0, 64.0]).unwrap();
        for (x, y) in r.d0.iter().zip(&r.d1) {
            assert!((x - y).abs() <= 1e-8 * x.max(1e-300), "{x} {y}");
        }
    }

    #[test]
    fn underresolved_frequency_is_refused() {
        let g = Grid::square(64, 8.0).unwrap();
        let m = Medium::constant(1.0, 0.0, 0.6).unwrap();
        let r = expansion_order_check(&Phase::plane([1.0, 0.0]), &gaussian(&g), &m, &[16.0, 64.0]);
        assert!(matches!(r, Err(Error::Resolution { .. })));
    }
}
