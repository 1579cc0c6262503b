use serde::{Deserialize, Serialize};

use super::{Medium, Omega, ScalarProfile};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumKind {
    /// `r` and `q` constants (defaults 1 and 0).
    Constant,
    /// `r = exp(x1)`.
    ExponentialSlab,
    /// `r = 1 + beta exp(-|x|^2 / sigma^2)`.
    Radial,
    /// `r` given by the `index` profile.
    Custom,
}

/// Medium section of an experiment config.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub kind: MediumKind,
    pub s: f64,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub index: Option<ScalarProfile>,
    #[serde(default)]
    pub omega: Option<Omega>,
    /// Overrides the potential of the kind.
    #[serde(default)]
    pub potential: Option<ScalarProfile>,
}

fn required(v: Option<f64>, key: &str, kind: MediumKind) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("medium kind {kind:?} requires `{key}`")))
}

impl MediumConfig {
    pub fn constant(r: f64, q: f64, s: f64) -> Self {
        Self {
            kind: MediumKind::Constant,
            s,
            r: Some(r),
            q: Some(q),
            beta: None,
            sigma: None,
            index: None,
            omega: None,
            potential: None,
        }
    }

    pub fn build(&self) -> Result<Medium> {
        let mut m = match self.kind {
            MediumKind::Constant => Medium::constant(self.r.unwrap_or(1.0), self.q.unwrap_or(0.0), self.s)?,
            MediumKind::ExponentialSlab => Medium::exponential_slab(self.s)?,
            MediumKind::Radial => Medium::radial(
                required(self.beta, "beta", self.kind)?,
                required(self.sigma, "sigma", self.kind)?,
                self.s,
            )?,
            MediumKind::Custom => {
                let r = self
                    .index
                    .clone()
                    .ok_or_else(|| Error::Config("medium kind Custom requires `index`".into()))?;
                Medium::new(r, ScalarProfile::constant(0.0), self.s, Omega::default())?
            }
        };
        if let Some(o) = &self.omega {
            m = m.with_omega(o.clone())?;
        }
        if let Some(q) = &self.potential {
            m = m.with_q(q.clone());
        }
        Ok(m)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_radial_medium_with_potential() {
        let cfg = MediumConfig::from_toml(
            r#"
kind = "radial"
beta = 0.1
sigma = 0.5
s = 0.75
[omega]
shape = "disk"
center = [0.0, 0.0]
radius = 1.0
[potential]
kind = "gaussian"
base = 0.0
amplitude = 1.0
center = [0.0, 0.0]
width = 0.3
"#,
        )
        .unwrap();
        let m = cfg.build().unwrap();
        assert!((m.r([0.0, 0.0]) - 1.1).abs() < 1e-14);
        assert!((m.q([0.0, 0.0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn missing_parameter_is_a_config_error() {
        let cfg = MediumConfig::from_toml("kind = \"radial\"\ns = 0.5\nbeta = 0.1\n").unwrap();
        assert!(matches!(cfg.build(), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        assert!(matches!(
            MediumConfig::from_toml("kind = \"constant\"\ns = 0.5\nbogus = 1\n"),
            Err(Error::Config(_))
        ));
    }
}
