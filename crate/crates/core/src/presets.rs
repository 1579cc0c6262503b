//! Standard experiment setups shared by the command line, the examples and the acceptance suite.

use crate::ansatz::{AnsatzRecipe, BoxSpec, RayGeometry, POINTS_PER_WAVELENGTH};
use crate::error::Result;
use crate::media::{Medium, MediumConfig, ScalarProfile};
use crate::residual::{expansion_order_check, ExpansionReport};
use crate::spectral::{Field, Grid};
use crate::transport::{BoundaryAmplitude, Phase};

pub const SWEEP_TAUS: [f64; 5] = [16.0, 32.0, 64.0, 128.0, 256.0];
pub const EXPANSION_TAUS: [f64; 4] = [16.0, 32.0, 64.0, 128.0];

fn plane_recipe_parts() -> (RayGeometry, BoundaryAmplitude, f64, BoxSpec) {
    (
        RayGeometry::plane([1.0, 0.0]),
        BoundaryAmplitude::transverse(0.4),
        0.5,
        BoxSpec::centered([6.0, 6.0]),
    )
}

/// Plane wave along `x_1` in `r = 1` with the Gaussian potential `potential * exp(-|x|^2 / 0.25)`.
pub fn high_s_recipe(s: f64, m: usize, potential: f64) -> AnsatzRecipe {
    let mut medium = MediumConfig::constant(1.0, 0.0, s);
    if potential != 0.0 {
        medium.potential = Some(ScalarProfile::Gaussian {
            base: 0.0,
            amplitude: potential,
            center: [0.0, 0.0],
            width: 0.5,
        });
    }
    let (geometry, boundary, margin, bx) = plane_recipe_parts();
    AnsatzRecipe::HighS {
        medium,
        geometry,
        boundary,
        m,
        margin,
        bx,
    }
}

/// Plane wave along `x_1` in `r = 1` with constant potential `q`.
pub fn low_s_recipe(s: f64, q: f64, with_phi1: bool) -> AnsatzRecipe {
    let (geometry, boundary, margin, bx) = plane_recipe_parts();
    AnsatzRecipe::LowS {
        medium: MediumConfig::constant(1.0, q, s),
        geometry,
        boundary,
        with_phi1,
        margin,
        bx,
    }
}

/// Expansion check for the phase `x_1` and the amplitude `exp(-|x|^2 / 0.3)` in `r = 1`, on the
/// coarsest `N x 64` grid over `[-4, 4]^2` resolving the largest frequency.
pub fn plane_gaussian_expansion(s: f64, taus: &[f64]) -> Result<ExpansionReport> {
    let tau_max = taus.iter().cloned().fold(1.0, f64::max);
    let n0 = Grid::size_for_wavenumber(8.0, tau_max, POINTS_PER_WAVELENGTH).max(256);
    let grid = Grid::new(vec![n0, 64], vec![8.0, 8.0], vec![-4.0, -4.0])?;
    let medium = Medium::constant(1.0, 0.0, s)?;
    let a = Field::from_real_fn(&grid, |x| (-(x[0] * x[0] + x[1] * x[1]) / 0.3).exp())?;
    expansion_order_check(&Phase::plane([1.0, 0.0]), &a, &medium, taus)
}
