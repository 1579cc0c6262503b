use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::provenance::sha256_hex;
use crate::spectral::{Field, Grid};

/// Grid points per wavelength demanded at the evaluation frequency.
pub const POINTS_PER_WAVELENGTH: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    HighS,
    LowS,
    ConstCoef,
}

/// `phi_order`, entering the phase with weight `tau^{1 - 2 s order}`.
#[derive(Clone, Debug)]
pub struct PhaseTerm {
    pub order: usize,
    pub field: Field,
}

/// `a_l`, entering with weight `tau^{-exponent}`.
#[derive(Clone, Debug)]
pub struct AmplitudeTerm {
    pub exponent: f64,
    pub field: Field,
}

/// Everything needed to reproduce an ansatz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzManifest {
    pub regime: Regime,
    pub s: f64,
    pub phase_orders: Vec<usize>,
    pub amplitude_exponents: Vec<f64>,
    pub lattice: Vec<f64>,
    pub medium: String,
    pub medium_hash: String,
    pub geometry: String,
    pub grid: String,
}

/// `u_M = chi exp(i tau sum_j tau^{-2sj} phi_j) sum_l tau^{-alpha_l} a_l`.
#[derive(Clone, Debug)]
pub struct GOAnsatz {
    pub(crate) regime: Regime,
    pub(crate) s: f64,
    pub(crate) phases: Vec<PhaseTerm>,
    pub(crate) amplitudes: Vec<AmplitudeTerm>,
    pub(crate) cutoff: Field,
    /// Per-axis bound on `|d_i phi|` over the support of the cutoff.
    pub(crate) phase_gradient_bound: [f64; 2],
    pub(crate) manifest: AnsatzManifest,
}

pub(crate) fn manifest(
    regime: Regime,
    s: f64,
    phases: &[PhaseTerm],
    amplitudes: &[AmplitudeTerm],
    lattice: Vec<f64>,
    medium: String,
    geometry: String,
    grid: &Grid,
) -> AnsatzManifest {
    AnsatzManifest {
        regime,
        s,
        phase_orders: phases.iter().map(|p| p.order).collect(),
        amplitude_exponents: amplitudes.iter().map(|a| a.exponent).collect(),
        lattice,
        medium_hash: sha256_hex(medium.as_bytes()),
        medium,
        geometry,
        grid: grid.descriptor(),
    }
}

impl GOAnsatz {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn phases(&self) -> &[PhaseTerm] {
        &self.phases
    }

    pub fn amplitudes(&self) -> &[AmplitudeTerm] {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> &Field {
        &self.cutoff
    }

    pub fn grid(&self) -> &Grid {
        self.cutoff.grid()
    }

    pub fn manifest(&self) -> &AnsatzManifest {
        &self.manifest
    }

    pub fn manifest_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.manifest).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn phase_gradient_bound(&self) -> [f64; 2] {
        self.phase_gradient_bound
    }

    /// Smallest sizes meeting the points-per-wavelength policy at `tau`, axis by axis.
    pub fn required_sizes(&self, tau: f64) -> Vec<usize> {
        let g = self.grid();
        (0..g.dim())
            .map(|i| {
                Grid::size_for_wavenumber(
                    g.periods()[i],
                    tau * self.phase_gradient_bound[i],
                    POINTS_PER_WAVELENGTH,
                )
            })
            .collect()
    }

    pub fn check_resolution(&self, tau: f64) -> Result<()> {
        let required = self.required_sizes(tau);
        let have = self.grid().sizes().to_vec();
        if have.iter().zip(&required).any(|(h, r)| h < r) {
            return Err(Error::Resolution { tau, have, required });
        }
        Ok(())
    }

    pub fn evaluate(&self, tau: f64) -> Result<Field> {
        if !(tau >= 1.0 && tau.is_finite()) {
            return Err(Error::Domain {
                what: "tau",
                value: tau,
                range: "[1, inf)",
            });
        }
        self.check_resolution(tau)?;
        let lt = tau.ln();
        let pw: Vec<f64> = self
            .phases
            .iter()
            .map(|p| ((1.0 - 2.0 * self.s * p.order as f64) * lt).exp())
            .collect();
        let aw: Vec<f64> = self.amplitudes.iter().map(|a| (-a.exponent * lt).exp()).collect();
        let grid = self.grid().clone();
        let values: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let chi = self.cutoff.at(k).re;
                if chi == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let theta: f64 = self.phases.iter().zip(&pw).map(|(p, w)| w * p.field.at(k).re).sum();
                let amp: Complex64 = self.amplitudes.iter().zip(&aw).map(|(a, w)| *w * a.field.at(k)).sum();
                chi * Complex64::from_polar(1.0, theta) * amp
            })
            .collect();
        Field::checked(grid, values, "GOAnsatz::evaluate")
    }
}
