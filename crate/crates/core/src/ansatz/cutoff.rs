use crate::error::{Error, Result};
use crate::media::Omega;
use crate::smooth::smooth_plateau;
use crate::spectral::{Field, Grid};

/// `chi = 1` on `Omega` dilated by `margin`, `0` outside the `2 margin` dilation, with a smooth
/// step in the signed distance between.
pub fn bump_cutoff(grid: &Grid, omega: &Omega, margin: f64) -> Result<Field> {
    if !(margin > 0.0) {
        return Err(Error::invalid("cutoff margin must be positive"));
    }
    let c = omega.center();
    let reach = omega.bounding_radius() + 2.0 * margin;
    let corners = [[c[0] - reach, c[1] - reach], [c[0] + reach, c[1] + reach]];
    if grid.dim() != 2 || corners.iter().any(|x| !grid.contains(*x, 0.0)) {
        return Err(Error::Support(format!(
            "Omega dilated by {} does not fit in the box {}",
            2.0 * margin,
            grid.descriptor()
        )));
    }
    Field::from_real_fn(grid, |x| smooth_plateau(omega.signed_distance(x), margin, 2.0 * margin))
}

/// Product of smooth plateaus `smooth_plateau(|x_i|, inner_i, outer_i)` over the axes.
pub fn box_cutoff(grid: &Grid, inner: [f64; 2], outer: [f64; 2]) -> Result<Field> {
    if (0..2).any(|i| !(outer[i] > inner[i] && inner[i] >= 0.0)) {
        return Err(Error::invalid("box cutoff needs 0 <= inner < outer per axis"));
    }
    Field::from_real_fn(grid, |x| {
        (0..grid.dim())
            .map(|i| smooth_plateau(x[i].abs(), inner[i], outer[i]))
            .product()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::frac_laplacian;

    #[test]
    fn cutoff_plateau_and_support() {
        let g = Grid::square(128, 8.0).unwrap();
        let om = Omega::unit_disk();
        let chi = bump_cutoff(&g, &om, 0.4).unwrap();
        for k in 0..g.len() {
            let x = g.point(k);
            let d = om.signed_distance(x);
            let v = chi.at(k).re;
            assert!((0.0..=1.0).contains(&v));
            if d <= 0.4 {
                assert_eq!(v, 1.0);
            }
            if d >= 0.8 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn margin_too_large_is_refused() {
        let g = Grid::square(64, 4.0).unwrap();
        assert!(matches!(
            bump_cutoff(&g, &Omega::unit_disk(), 0.6),
            Err(Error::Support(_))
        ));
    }

    #[test]
    fn laplacian_is_refinement_stable() {
        let lap = |n: usize| {
            let g = Grid::square(n, 8.0).unwrap();
            let chi = bump_cutoff(&g, &Omega::unit_disk(), 0.5).unwrap();
            frac_laplacian(&chi, 1.0).unwrap().norm_l2(None)
        };
        let (a, b) = (lap(256), lap(512));
        assert!((a - b).abs() < 1e-4 * b, "{a} {b}");
    }
}
