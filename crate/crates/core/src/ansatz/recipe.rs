use serde::{Deserialize, Serialize};

use super::builders::{build_const_coef, build_high_s, build_low_s, ConstCoefSetup, RayGeometry};
use super::go::GOAnsatz;
use crate::error::{Error, Result};
use crate::media::{Medium, MediumConfig, Omega};
use crate::spectral::Grid;
use crate::transport::BoundaryAmplitude;

/// Box of a variable-medium build. Sizes default to 64 per axis and are raised to whatever the
/// resolution policy asks for at the largest frequency of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub periods: [f64; 2],
    #[serde(default)]
    pub origin: Option<[f64; 2]>,
    #[serde(default)]
    pub sizes: Option<[usize; 2]>,
}

impl BoxSpec {
    pub fn centered(periods: [f64; 2]) -> Self {
        Self {
            periods,
            origin: None,
            sizes: None,
        }
    }

    fn grid(&self, sizes: [usize; 2]) -> Result<Grid> {
        let origin = self.origin.unwrap_or([-0.5 * self.periods[0], -0.5 * self.periods[1]]);
        Grid::new(sizes.to_vec(), self.periods.to_vec(), origin.to_vec())
    }
}

/// Serializable description of how to build an ansatz, so sweeps can rebuild it on refined grids.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum AnsatzRecipe {
    /// `r = 1`, `q = 0`, `Omega = [-1, 1]^2`, plane wave along `x_1`.
    ConstCoef { s: f64, m: usize },
    HighS {
        medium: MediumConfig,
        geometry: RayGeometry,
        boundary: BoundaryAmplitude,
        m: usize,
        margin: f64,
        #[serde(rename = "box")]
        bx: BoxSpec,
    },
    LowS {
        medium: MediumConfig,
        geometry: RayGeometry,
        boundary: BoundaryAmplitude,
        with_phi1: bool,
        margin: f64,
        #[serde(rename = "box")]
        bx: BoxSpec,
    },
}

pub fn const_coef_medium(s: f64) -> Result<Medium> {
    Medium::constant(1.0, 0.0, s)?.with_omega(Omega::Rectangle {
        lo: [-1.0, -1.0],
        hi: [1.0, 1.0],
    })
}

impl AnsatzRecipe {
    pub fn s(&self) -> f64 {
        match self {
            Self::ConstCoef { s, .. } => *s,
            Self::HighS { medium, .. } | Self::LowS { medium, .. } => medium.s,
        }
    }

    pub fn medium(&self) -> Result<Medium> {
        match self {
            Self::ConstCoef { s, .. } => const_coef_medium(*s),
            Self::HighS { medium, .. } | Self::LowS { medium, .. } => medium.build(),
        }
    }

    /// Same low-s recipe with `phi_1` switched on or off.
    pub fn with_phi1(&self, on: bool) -> Result<Self> {
        match self {
            Self::LowS {
                medium,
                geometry,
                boundary,
                margin,
                bx,
                ..
            } => Ok(Self::LowS {
                medium: medium.clone(),
                geometry: geometry.clone(),
                boundary: boundary.clone(),
                with_phi1: on,
                margin: *margin,
                bx: bx.clone(),
            }),
            _ => Err(Error::invalid("phase correction toggles only apply to low-s recipes")),
        }
    }

    fn build_on(&self, medium: &Medium, grid: &Grid) -> Result<GOAnsatz> {
        match self {
            Self::HighS {
                geometry,
                boundary,
                m,
                margin,
                ..
            } => build_high_s(medium, grid, geometry, boundary, *m, *margin),
            Self::LowS {
                geometry,
                boundary,
                with_phi1,
                margin,
                ..
            } => build_low_s(medium, grid, geometry, boundary, *with_phi1, *margin),
            Self::ConstCoef { .. } => Err(Error::invalid("constant-coefficient recipes own their grid")),
        }
    }

    /// Builds the ansatz on the coarsest admissible grid for `tau_max`, then refines every axis
    /// by `refine`.
    pub fn build(&self, tau_max: f64, refine: usize) -> Result<(GOAnsatz, Medium)> {
        if refine == 0 || !refine.is_power_of_two() {
            return Err(Error::invalid("refinement factor must be a power of two"));
        }
        let medium = self.medium()?;
        let ansatz = match self {
            Self::ConstCoef { s, m } => build_const_coef(&ConstCoefSetup::standard(*s, *m, tau_max, refine)?)?,
            Self::HighS { bx, .. } | Self::LowS { bx, .. } => {
                let base = bx.sizes.unwrap_or([64, 64]);
                let trial = self.build_on(&medium, &bx.grid(base)?)?;
                let need = trial.required_sizes(tau_max);
                let sizes = [base[0].max(need[0]) * refine, base[1].max(need[1]) * refine];
                if sizes == base {
                    trial
                } else {
                    self.build_on(&medium, &bx.grid(sizes)?)?
                }
            }
        };
        Ok((ansatz, medium))
    }
}
