use num_complex::Complex64;

use crate::error::Result;
use crate::media::Medium;
use crate::spectral::{frac_laplacian, sobolev_norm_scl, Field};

/// `((-Delta)^s - tau^{2s} r^{2s} + q) u` on the grid of `u`.
pub fn apply_helmholtz(medium: &Medium, u: &Field, tau: f64) -> Result<Field> {
    let s = medium.s();
    let lap = frac_laplacian(u, s)?;
    let t2s = tau.powf(2.0 * s);
    let grid = u.grid();
    let coef: Vec<f64> = (0..grid.len())
        .map(|k| {
            let x = grid.point(k);
            medium.q(x) - t2s * medium.r(x).powf(2.0 * s)
        })
        .collect();
    let values = (0..grid.len())
        .map(|k| lap.at(k) + coef[k] * u.at(k))
        .collect::<Vec<Complex64>>();
    Field::checked(grid.clone(), values, "apply_helmholtz")
}

/// `|| ((-Delta)^s - tau^{2s} r^{2s} + q) u ||` in `H^beta_scl(Omega)` with `h = 1 / tau`.
pub fn residual(medium: &Medium, u: &Field, tau: f64, beta: f64) -> Result<f64> {
    let lu = apply_helmholtz(medium, u, tau)?;
    let mask = medium.omega().mask(u.grid());
    sobolev_norm_scl(&lu, beta, 1.0 / tau, Some(&mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::bump_cutoff;
    use crate::media::Omega;
    use crate::spectral::{solve_const_helmholtz, Grid};
    use proptest::prelude::*;

    #[test]
    fn exact_torus_solution() {
        let s = 0.6;
        let tau = 20.3;
        let g = Grid::square(256, 8.0).unwrap();
        let m = Medium::constant(1.0, 0.0, s).unwrap();
        let f = Field::from_real_fn(&g, |x| (-(x[0] * x[0] + x[1] * x[1]) / 0.1).exp()).unwrap();
        let u = solve_const_helmholtz(&f, tau, s, None).unwrap();
        let lu = apply_helmholtz(&m, &u, tau).unwrap();
        assert!(lu.sub(&f).unwrap().norm_l2(None) <= 1e-10 * f.norm_l2(None));
        let r = residual(&m, &u, tau, 0.0).unwrap();
        assert!((r - f.norm_l2(Some(&m.omega().mask(&g)))).abs() < 1e-9 * r);
    }

    #[test]
    fn cut_plane_wave_is_exact_inside() {
        let s = 0.75;
        let tau = 64.0;
        let g = Grid::square(1024, 8.0).unwrap();
        let m = Medium::constant(1.0, 0.0, s).unwrap();
        let chi = bump_cutoff(&g, &Omega::unit_disk(), 0.75).unwrap();
        let u = chi
            .map_with_point(|x, c| c * Complex64::from_polar(1.0, tau * x[0]))
            .unwrap();
        let r = residual(&m, &u, tau, 0.0).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn noise_is_dominated_by_the_frequency_term() {
        use rand::{Rng, SeedableRng};
        let s = 0.5;
        let tau = 4.0;
        let g = Grid::square(32, 6.0).unwrap();
        let m = Medium::constant(1.0, 0.0, s)
            .unwrap()
            .with_omega(Omega::disk(2.5))
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let vals: Vec<Complex64> = (0..g.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, 0.0))
            .collect();
        let u = Field::new(g.clone(), vals).unwrap();
        let r = residual(&m, &u, tau, 0.0).unwrap();
        let mask = m.omega().mask(&g);
        let dominant = tau.powf(2.0 * s) * u.norm_l2(Some(&mask));
        let lap = frac_laplacian(&u, s).unwrap().norm_l2(Some(&mask));
        assert!(r <= dominant + lap + 1e-12);
        assert!(r >= (dominant - lap).abs() - 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn bracket_norm_dominates_l2(tau in 1.0f64..40.0, s in 0.1f64..0.95, c in -2.0f64..2.0) {
            let g = Grid::square(32, 6.0).unwrap();
            let m = Medium::constant(1.0, 0.0, s).unwrap();
            let u = Field::from_real_fn(&g, |x| (-(x[0] - c).powi(2) - x[1] * x[1]).exp() * (3.0 * x[1]).cos()).unwrap();
            let b0 = residual(&m, &u, tau, 0.0).unwrap();
            let b1 = residual(&m, &u, tau, 1.0).unwrap();
            prop_assert!(b1 >= b0 * (1.0 - 1e-12));
        }
    }
}
