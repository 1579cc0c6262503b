use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_log2_slope, SlopeFit};
use super::operator::residual;
use crate::ansatz::{AnsatzManifest, AnsatzRecipe, GOAnsatz};
use crate::error::{Error, Result};
use crate::media::Medium;
use crate::transport::is_half;

/// Largest slope change under one grid doubling for a report to be citable.
pub const REFINEMENT_TOLERANCE: f64 = 0.1;

/// Expected decay exponent with the reasoning behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub slope: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub slope: f64,
    pub shift: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub taus: Vec<f64>,
    pub residual_b0: Vec<f64>,
    pub residual_b1: Vec<f64>,
    pub fit: SlopeFit,
    pub fit_b1: SlopeFit,
    pub prediction: Prediction,
    pub refinement: Option<Refinement>,
    pub manifest: AnsatzManifest,
}

impl SweepReport {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }

    /// Whether the refinement gate ran and passed.
    pub fn citable(&self) -> bool {
        self.refinement.as_ref().is_some_and(|r| r.pass)
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "tau,residual_b0,residual_b1")?;
        for ((t, a), b) in self.taus.iter().zip(&self.residual_b0).zip(&self.residual_b1) {
            writeln!(w, "{t},{a:.12e},{b:.12e}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Decay exponent of the truncation error left by `recipe`.
pub fn predicted_slope(recipe: &AnsatzRecipe) -> Result<Prediction> {
    let s = recipe.s();
    let q_free = recipe.medium()?.q_vanishes();
    let lead = 2.0 * s - 2.0;
    let (slope, note) = match recipe {
        AnsatzRecipe::ConstCoef { m, .. } => (
            2.0 * s - *m as f64 - 2.0,
            format!(
                "symbol terms tau^(2s-nu-l) with nu + l = {} are the first left unbalanced",
                m + 2
            ),
        ),
        AnsatzRecipe::HighS { m, .. } => {
            if is_half(s) || q_free {
                (lead, "only tau^(2s-2) L_(2;0) a_0 is left".into())
            } else if *m == 1 {
                (0.0, "q a_0 at tau^0 is left".into())
            } else {
                (
                    lead.max(1.0 - 2.0 * s),
                    "tau^(2s-2) L_(2;0) a_0 and tau^(1-2s) q a_1 are left".into(),
                )
            }
        }
        AnsatzRecipe::LowS { with_phi1, .. } => {
            if q_free {
                (lead, "phi_1 vanishes; only tau^(2s-2) L_(2;0) a_0 is left".into())
            } else if *with_phi1 {
                (
                    (-2.0 * s).max(lead),
                    "quadratic phi_1 terms at tau^(-2s) are left".into(),
                )
            } else {
                (0.0, "q a_0 at tau^0 is left without phi_1".into())
            }
        }
    };
    Ok(Prediction { slope, note })
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.len() < 4 {
        return Err(Error::invalid("a sweep needs at least four frequencies"));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) || !(taus[0] >= 1.0) {
        return Err(Error::invalid("sweep frequencies must be >= 1 and strictly increasing"));
    }
    Ok(())
}

/// Residual norms `(beta = 0, beta = 1)` at each frequency; aborts at the first failure with
/// the completed prefix attached.
pub fn measure(ansatz: &GOAnsatz, medium: &Medium, taus: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let results: Vec<Result<(f64, f64)>> = taus
        .par_iter()
        .map(|&tau| {
            let u = ansatz.evaluate(tau)?;
            Ok((residual(medium, &u, tau, 0.0)?, residual(medium, &u, tau, 1.0)?))
        })
        .collect();
    let mut b0 = Vec::new();
    let mut b1 = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((a, b)) => {
                b0.push(a);
                b1.push(b);
            }
            Err(e) => {
                return Err(Error::SweepAborted {
                    tau: taus[i],
                    completed: i,
                    partial_taus: taus[..i].to_vec(),
                    partial_residuals: b0,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok((b0, b1))
}

/// Builds the ansatz for the largest frequency, measures residuals at every `tau`, fits the
/// decay and (when `refine_check`) repeats on grids doubled along every axis.
pub fn tau_sweep(recipe: &AnsatzRecipe, taus: &[f64], refine_check: bool) -> Result<SweepReport> {
    check_taus(taus)?;
    let tau_max = taus[taus.len() - 1];
    let prediction = predicted_slope(recipe)?;
    let (ansatz, medium) = recipe.build(tau_max, 1)?;
    let (b0, b1) = measure(&ansatz, &medium, taus)?;
    let fit = fit_log2_slope(taus, &b0)?;
    let fit_b1 = fit_log2_slope(taus, &b1)?;
    let refinement = if refine_check {
        let (fine, medium) = recipe.build(tau_max, 2)?;
        let (r0, _) = measure(&fine, &medium, taus)?;
        let slope = fit_log2_slope(taus, &r0)?.slope;
        let shift = (slope - fit.slope).abs();
        Some(Refinement {
            slope,
            shift,
            pass: shift < REFINEMENT_TOLERANCE,
        })
    } else {
        None
    };
    Ok(SweepReport {
        taus: taus.to_vec(),
        residual_b0: b0,
        residual_b1: b1,
        fit,
        fit_b1,
        prediction,
        refinement,
        manifest: ansatz.manifest().clone(),
    })
}
