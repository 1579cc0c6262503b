use serde::{Deserialize, Serialize};

use super::sweep::{tau_sweep, SweepReport};
use crate::ansatz::AnsatzRecipe;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub without_phi1: SweepReport,
    pub with_phi1: SweepReport,
}

impl AblationReport {
    pub fn slopes(&self) -> (f64, f64) {
        (self.without_phi1.slope(), self.with_phi1.slope())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Runs the same low-s sweep with `phi_1` off and on.
pub fn phase_correction_ablation(recipe: &AnsatzRecipe, taus: &[f64], refine_check: bool) -> Result<AblationReport> {
    let s = recipe.s();
    if !(s > 0.0 && s < 0.5) {
        return Err(Error::Regime {
            operation: "phase_correction_ablation",
            s,
            required: "s in (0, 1/2)",
        });
    }
    Ok(AblationReport {
        without_phi1: tau_sweep(&recipe.with_phi1(false)?, taus, refine_check)?,
        with_phi1: tau_sweep(&recipe.with_phi1(true)?, taus, refine_check)?,
    })
}
