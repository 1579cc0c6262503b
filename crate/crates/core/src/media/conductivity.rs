use num_complex::Complex64;

use super::{Medium, Omega, SampledProfile, ScalarProfile};
use crate::error::{Error, Result};
use crate::spectral::{frac_laplacian, Field};

/// Exterior tolerance for `gamma = 1` outside `Omega`.
pub const CONDUCTIVITY_EXTERIOR_TOL: f64 = 1e-4;

/// Liouville reduction: `r = gamma^{-1/2s}`, `q = -gamma^{-1/2} (-Delta)^s gamma^{1/2}`.
pub fn medium_from_conductivity(gamma: &Field, s: f64, omega: Omega) -> Result<Medium> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            what: "s",
            value: s,
            range: "(0, 1)",
        });
    }
    let grid = gamma.grid();
    for (k, v) in gamma.values().iter().enumerate() {
        if !(v.re > 0.0) || v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
            return Err(Error::Domain {
                what: "gamma",
                value: v.re,
                range: "(0, inf), real",
            });
        }
        let x = grid.point(k);
        if !omega.contains(x) && (v.re - 1.0).abs() > CONDUCTIVITY_EXTERIOR_TOL {
            return Err(Error::Support(format!("gamma = {} != 1 outside Omega at {x:?}", v.re)));
        }
    }
    let sqrt_g = gamma.map(|v| Complex64::new(v.re.sqrt(), 0.0))?;
    let lap = frac_laplacian(&sqrt_g, s)?;
    let q = lap.zip_map(&sqrt_g, |l, g| Complex64::new(-l.re / g.re, 0.0))?;
    let r = gamma.map(|v| Complex64::new(v.re.powf(-0.5 / s), 0.0))?;
    Medium::new(
        ScalarProfile::Sampled(SampledProfile::new(r)?),
        ScalarProfile::Sampled(SampledProfile::new(q)?),
        s,
        omega,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn constant_conductivities() {
        let g = Grid::square(32, 8.0).unwrap();
        let one = Field::constant(&g, Complex64::new(1.0, 0.0)).unwrap();
        let m = medium_from_conductivity(&one, 0.3, Omega::unit_disk()).unwrap();
        assert!((m.r([0.1, 0.2]) - 1.0).abs() < 1e-12);
        assert!(m.q([0.1, 0.2]).abs() < 1e-12);

        let four = Field::constant(&g, Complex64::new(4.0, 0.0)).unwrap();
        // gamma = 4 everywhere breaks the exterior condition on purpose
        assert!(matches!(
            medium_from_conductivity(&four, 0.5, Omega::unit_disk()),
            Err(Error::Support(_))
        ));
        let big = Omega::disk(10.0);
        let m = medium_from_conductivity(&four, 0.5, big).unwrap();
        assert!((m.r([0.0, 0.0]) - 0.25).abs() < 1e-12);
        assert!(m.q([0.0, 0.0]).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_conductivity_is_rejected() {
        let g = Grid::square(16, 8.0).unwrap();
        let f = Field::from_real_fn(&g, |x| if x[0] == 0.0 && x[1] == 0.0 { -1.0 } else { 1.0 }).unwrap();
        assert!(matches!(
            medium_from_conductivity(&f, 0.5, Omega::unit_disk()),
            Err(Error::Domain { .. })
        ));
    }
}
