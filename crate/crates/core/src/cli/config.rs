use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzRecipe;
use crate::error::{Error, Result};
use crate::presets::{EXPANSION_TAUS, SWEEP_TAUS};
use crate::provenance::sha256_hex;
use crate::xray::{Phantom, StabilityConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ConstcoefDemo,
    ExpansionCheck,
    ResidualSweep,
    PhaseAblation,
    XrayRecover,
    StabilityExp,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::ConstcoefDemo => "constcoef-demo",
            Self::ExpansionCheck => "expansion-check",
            Self::ResidualSweep => "residual-sweep",
            Self::PhaseAblation => "phase-ablation",
            Self::XrayRecover => "xray-recover",
            Self::StabilityExp => "stability-exp",
        }
    }
}

/// Ansatz family of a residual sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepRegime {
    Const,
    High,
    Low,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XrayRecoverConfig {
    pub grid_size: usize,
    pub period: f64,
    pub n_base: usize,
    pub n_dirs: usize,
    pub iterations: usize,
    pub lambda: f64,
    /// Relative noise added to the data (0 for exact data).
    pub noise: f64,
    pub seed: u64,
    pub phantom: Phantom,
    /// Largest admissible relative L2 error on `Omega`.
    pub error_gate: f64,
}

impl Default for XrayRecoverConfig {
    fn default() -> Self {
        Self {
            grid_size: 64,
            period: 2.8,
            n_base: 64,
            n_dirs: 128,
            iterations: 200,
            lambda: 1e-6,
            noise: 0.0,
            seed: 1,
            phantom: Phantom::default(),
            error_gate: 0.05,
        }
    }
}

fn schema() -> u32 {
    SCHEMA_VERSION
}

/// Experiment file. Keys left out are filled per kind by [`ExperimentConfig::resolve`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema")]
    pub schema_version: u32,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub regime: Option<SweepRegime>,
    /// Potential strength of the preset media.
    #[serde(default)]
    pub potential: Option<f64>,
    #[serde(default)]
    pub with_phi1: Option<bool>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub taus: Option<Vec<f64>>,
    #[serde(default)]
    pub refine_check: Option<bool>,
    /// Residual sweeps pass when the fitted slope is at most this.
    #[serde(default)]
    pub slope_gate: Option<f64>,
    /// Full recipe for a residual sweep; replaces `regime`, `m` and `potential`.
    #[serde(default)]
    pub recipe: Option<AnsatzRecipe>,
    #[serde(default)]
    pub xray: Option<XrayRecoverConfig>,
    #[serde(default)]
    pub stability: Option<StabilityConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

fn check_s(s: f64, lo: f64, hi: f64, closed_lo: bool, what: &str) -> Result<()> {
    let ok = if closed_lo { s >= lo && s < hi } else { s > lo && s < hi };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} needs s in {}{lo}, {hi}), got {s}",
            if closed_lo { "[" } else { "(" }
        )))
    }
}

fn check_taus(taus: &[f64], min: usize) -> Result<()> {
    if taus.len() < min || taus[0] < 1.0 || taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!(
            "taus must hold at least {min} strictly increasing values >= 1, got {taus:?}"
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind,
            s: None,
            m: None,
            regime: None,
            potential: None,
            with_phi1: None,
            tau: None,
            taus: None,
            refine_check: None,
            slope_gate: None,
            recipe: None,
            xray: None,
            stability: None,
            output: None,
            jobs: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// Fills every default of the kind and validates the result.
    pub fn resolve(&self) -> Result<Self> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let mut c = self.clone();
        if c.jobs == Some(0) {
            return Err(Error::Config("jobs must be positive".into()));
        }
        match c.kind {
            ExperimentKind::ConstcoefDemo => {
                let s = *c.s.get_or_insert(0.6);
                check_s(s, 0.0, 1.0, false, "constcoef-demo")?;
                c.m.get_or_insert(3);
                let tau = *c.tau.get_or_insert(64.0);
                if !(tau >= 1.0) {
                    return Err(Error::Config(format!("tau must be >= 1, got {tau}")));
                }
            }
            ExperimentKind::ExpansionCheck => {
                let s = *c.s.get_or_insert(0.5);
                check_s(s, 0.0, 1.0, false, "expansion-check")?;
                check_taus(c.taus.get_or_insert_with(|| EXPANSION_TAUS.to_vec()), 2)?;
            }
            ExperimentKind::ResidualSweep => {
                if let Some(r) = &c.recipe {
                    c.s = Some(r.s());
                    c.regime = None;
                    c.m = None;
                    c.potential = None;
                } else {
                    let s = *c.s.get_or_insert(0.6);
                    let regime = *c.regime.get_or_insert(SweepRegime::Const);
                    match regime {
                        SweepRegime::Const => {
                            check_s(s, 0.0, 1.0, false, "the constant-coefficient sweep")?;
                            let m = *c.m.get_or_insert(3);
                            if !(1..=6).contains(&m) {
                                return Err(Error::Config(format!("m must be in 1..=6, got {m}")));
                            }
                            c.potential = None;
                            c.with_phi1 = None;
                        }
                        SweepRegime::High => {
                            check_s(s, 0.5, 1.0, true, "the high-s sweep")?;
                            let m = *c.m.get_or_insert(2);
                            if !(1..=2).contains(&m) {
                                return Err(Error::Config(format!("m must be 1 or 2 for high s, got {m}")));
                            }
                            c.potential.get_or_insert(1.0);
                            c.with_phi1 = None;
                        }
                        SweepRegime::Low => {
                            check_s(s, 0.0, 0.5, false, "the low-s sweep")?;
                            c.m = None;
                            c.potential.get_or_insert(1.0);
                            c.with_phi1.get_or_insert(true);
                        }
                    }
                }
                check_taus(c.taus.get_or_insert_with(|| SWEEP_TAUS.to_vec()), 4)?;
                c.refine_check.get_or_insert(true);
            }
            ExperimentKind::PhaseAblation => {
                let s = *c.s.get_or_insert(0.3);
                check_s(s, 0.0, 0.5, false, "phase-ablation")?;
                c.potential.get_or_insert(1.0);
                check_taus(c.taus.get_or_insert_with(|| SWEEP_TAUS.to_vec()), 4)?;
                c.refine_check.get_or_insert(true);
            }
            ExperimentKind::XrayRecover => {
                let s = *c.s.get_or_insert(0.75);
                check_s(s, 0.5, 1.0, true, "xray-recover")?;
                let x = c.xray.get_or_insert_with(XrayRecoverConfig::default);
                if x.grid_size < 8
                    || x.n_base == 0
                    || x.n_dirs == 0
                    || x.iterations == 0
                    || x.lambda < 0.0
                    || x.noise < 0.0
                {
                    return Err(Error::Config(
                        "xray section has a non-positive size or negative weight".into(),
                    ));
                }
            }
            ExperimentKind::StabilityExp => {
                let st = c.stability.get_or_insert_with(StabilityConfig::default);
                if let Some(s) = c.s {
                    st.s = s;
                }
                c.s = Some(st.s);
                check_s(st.s, 0.5, 1.0, true, "stability-exp")?;
            }
        }
        Ok(c)
    }

    /// Hash of the resolved experiment, independent of where artifacts go and how many workers run.
    pub fn manifest_hash(&self) -> Result<String> {
        let mut c = self.clone();
        c.output = None;
        c.jobs = None;
        let text = c.to_toml()?;
        Ok(sha256_hex(
            format!("fracgo {}\n{text}", env!("CARGO_PKG_VERSION")).as_bytes(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_resolves_and_round_trips() {
        for kind in ExperimentKind::value_variants() {
            let c = ExperimentConfig::new(*kind).resolve().unwrap();
            let text = c.to_toml().unwrap();
            let back = ExperimentConfig::from_toml(&text).unwrap().resolve().unwrap();
            assert_eq!(back.to_toml().unwrap(), text);
            assert_eq!(back.manifest_hash().unwrap(), c.manifest_hash().unwrap());
        }
    }

    #[test]
    fn output_does_not_enter_the_hash() {
        let a = ExperimentConfig::new(ExperimentKind::ExpansionCheck).resolve().unwrap();
        let mut b = a.clone();
        b.output = Some("elsewhere".into());
        b.jobs = Some(3);
        assert_eq!(a.manifest_hash().unwrap(), b.manifest_hash().unwrap());
        b.s = Some(0.75);
        assert_ne!(a.manifest_hash().unwrap(), b.manifest_hash().unwrap());
    }

    #[test]
    fn schema_violations_are_config_errors() {
        assert!(matches!(
            ExperimentConfig::from_toml("kind = \"nope\""),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_toml("kind = \"expansion-check\"\nfoo = 1"),
            Err(Error::Config(_))
        ));
        let mut c = ExperimentConfig::new(ExperimentKind::ResidualSweep);
        c.regime = Some(SweepRegime::High);
        c.s = Some(0.3);
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
        let mut c = ExperimentConfig::new(ExperimentKind::StabilityExp);
        c.s = Some(0.4);
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
        let mut c = ExperimentConfig::new(ExperimentKind::ResidualSweep);
        c.taus = Some(vec![16.0, 8.0, 32.0, 64.0]);
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
        let mut c = ExperimentConfig::new(ExperimentKind::ExpansionCheck);
        c.schema_version = 9;
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
    }
}
