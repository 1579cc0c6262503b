use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::XRayData;
use super::geometry::XRayGeometry;
use super::operator::{ray_transform_fn, RayOperator};
use super::weighted::{weighted_potential, WeightedPotential};
use crate::error::{Error, Result};
use crate::media::{build_polar_chart, ChartBase, ChartOptions, Medium, MediumConfig};
use crate::provenance::sha256_hex;
use crate::residual::{fit_log2_slope, SlopeFit};
use crate::smooth::smooth_plateau;
use crate::spectral::{Field, Grid, Mask};
use crate::transport::is_half;

fn gate(operation: &'static str, s: f64) -> Result<()> {
    if !(0.5..1.0).contains(&s) {
        return Err(Error::Regime {
            operation,
            s,
            required: "s in [1/2, 1)",
        });
    }
    Ok(())
}

/// Decay order of the first amplitude correction: `2s - 1`, or `1` at `s = 1/2`.
pub fn alpha1(s: f64) -> Result<f64> {
    gate("alpha1", s)?;
    Ok(if is_half(s) { 1.0 } else { 2.0 * s - 1.0 })
}

/// `tau = delta^{-1/(2s + alpha_1)}`.
pub fn optimal_tau(delta: f64, s: f64) -> Result<f64> {
    gate("optimal_tau", s)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            range: "(0, 1)",
        });
    }
    Ok(delta.powf(-1.0 / (2.0 * s + alpha1(s)?)))
}

/// `gamma = alpha_1 / (4s + 2 alpha_1) * t_M / (t_M + 1)`.
pub fn predicted_gamma(s: f64, t_m: f64) -> Result<f64> {
    gate("predicted_gamma", s)?;
    if !(t_m >= 1.0) {
        return Err(Error::Domain {
            what: "t_M",
            value: t_m,
            range: "[1, inf]",
        });
    }
    let a = alpha1(s)?;
    let sobolev = if t_m.is_infinite() { 1.0 } else { t_m / (t_m + 1.0) };
    Ok(a / (4.0 * s + 2.0 * a) * sobolev)
}

/// Gaussian bump tapered smoothly to zero inside the unit disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phantom {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
    pub taper: [f64; 2],
}

impl Default for Phantom {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            center: [0.2, -0.1],
            width: 0.4,
            taper: [0.7, 0.95],
        }
    }
}

impl Phantom {
    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let d2 = (x[0] - self.center[0]).powi(2) + (x[1] - self.center[1]).powi(2);
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        self.amplitude * (-d2 / (self.width * self.width)).exp() * smooth_plateau(rho, self.taper[0], self.taper[1])
    }
}

fn default_s() -> f64 {
    0.75
}
fn default_deltas() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4, 1e-5]
}
fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3]
}
fn default_t_m() -> f64 {
    4.0
}
fn default_grid_size() -> usize {
    64
}
fn default_period() -> f64 {
    2.8
}
fn default_base() -> usize {
    2 * super::geometry::DEFAULT_BASE_POINTS
}
fn default_dirs() -> usize {
    2 * super::geometry::DEFAULT_DIRECTIONS
}
fn default_iterations() -> usize {
    200
}
fn default_lambda_factor() -> f64 {
    0.1
}
fn default_baseline_lambda() -> f64 {
    1e-6
}
fn default_window() -> [f64; 2] {
    [0.5, 1.5]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    #[serde(default = "default_s")]
    pub s: f64,
    /// Background medium; `r = 1`, `q = 0` when absent. Its potential is `q_2`.
    #[serde(default)]
    pub medium: Option<MediumConfig>,
    #[serde(default)]
    pub phantom: Phantom,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_t_m")]
    pub t_m: f64,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_period")]
    pub period: f64,
    #[serde(default = "default_base")]
    pub n_base: usize,
    #[serde(default = "default_dirs")]
    pub n_dirs: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    /// `lambda = lambda_factor * noise * |I|^2`.
    #[serde(default = "default_lambda_factor")]
    pub lambda_factor: f64,
    /// Regularization of the noiseless baseline.
    #[serde(default = "default_baseline_lambda")]
    pub baseline_lambda: f64,
    /// Accepted band for `fitted / predicted`.
    #[serde(default = "default_window")]
    pub gamma_window: [f64; 2],
}

impl Default for StabilityConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults parse")
    }
}

impl StabilityConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    fn medium(&self) -> Result<Medium> {
        let mut cfg = self
            .medium
            .clone()
            .unwrap_or_else(|| MediumConfig::constant(1.0, 0.0, self.s));
        cfg.s = self.s;
        cfg.build()
    }

    fn validate(&self) -> Result<()> {
        gate("stability_experiment", self.s)?;
        if self.deltas.len() < 2 || self.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
            return Err(Error::Config("need two or more noise levels in (0, 1)".into()));
        }
        if self.seeds.is_empty() || self.iterations == 0 {
            return Err(Error::Config("need at least one seed and one iteration".into()));
        }
        Ok(())
    }
}

/// Everything fixed across noise cells: operator, weights and clean data.
pub struct StabilitySetup {
    pub medium: Medium,
    pub grid: Grid,
    pub operator: RayOperator,
    pub weighted: WeightedPotential,
    pub clean: XRayData,
    pub operator_norm: f64,
    support: Mask,
}

impl StabilitySetup {
    pub fn new(cfg: &StabilityConfig) -> Result<Self> {
        cfg.validate()?;
        let medium = cfg.medium()?;
        let grid = Grid::square(cfg.grid_size, cfg.period)?;
        let geometry = XRayGeometry::around(&medium, cfg.n_base, cfg.n_dirs)?;
        let operator = RayOperator::new(&medium, &grid, &geometry, None)?;
        let support = medium.omega().mask(&grid);
        let q2 = medium.q_field(&grid)?;
        let q1 = q2.add(&Field::from_real_fn(&grid, |x| cfg.phantom.eval(x))?)?;
        let chart = if is_half(cfg.s) {
            let reach = medium.outer().bounding_radius();
            let c = medium.omega().center();
            Some(build_polar_chart(
                &medium,
                ChartBase::Plane {
                    origin: [c[0] - reach, c[1]],
                    direction: [1.0, 0.0],
                    half_width: reach,
                },
                ChartOptions {
                    n_rays: 257,
                    dt: 1e-2,
                    budget: 100.0,
                },
            )?)
        } else {
            None
        };
        let weighted = weighted_potential(&medium, &q1, &q2, chart.as_ref())?;
        let rmax = medium.r_field(&grid)?.max_abs();
        let q = weighted.q.clone();
        let clean = ray_transform_fn(&medium, |x| q.sample(x), &geometry, 0.25 * grid.max_spacing() / rmax)?;
        let operator_norm = operator.norm_estimate(30)?;
        Ok(Self {
            medium,
            grid,
            operator,
            weighted,
            clean,
            operator_norm,
            support,
        })
    }

    /// Inverts noisy data and unweights; returns the recovered `q_1 - q_2` and CG iterations.
    pub fn recover(&self, noise: f64, lambda: f64, seed: u64, iterations: usize) -> Result<(Field, usize)> {
        let data = if noise > 0.0 {
            self.clean.with_noise(noise, seed)
        } else {
            self.clean.clone()
        };
        let (q, report) = self.operator.invert(&data, &self.support, iterations, lambda)?;
        Ok((self.weighted.unweight(&q)?, report.iterations))
    }

    pub fn relative_error(&self, recovered: &Field) -> Result<f64> {
        let truth = &self.weighted.difference;
        Ok(recovered.sub(truth)?.norm_l2(Some(&self.support)) / truth.norm_l2(Some(&self.support)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCell {
    pub delta: f64,
    pub tau: f64,
    pub noise_level: f64,
    pub lambda: f64,
    pub errors: Vec<f64>,
    pub median_error: f64,
    pub cg_iterations: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub config: StabilityConfig,
    pub config_hash: String,
    pub medium: String,
    pub grid: String,
    pub operator_norm: f64,
    pub cells: Vec<StabilityCell>,
    pub baseline_error: f64,
    pub fit: SlopeFit,
    pub fitted_exponent: f64,
    pub predicted_gamma: f64,
    pub ratio: f64,
    pub within_window: bool,
    pub limitation: String,
}

impl StabilityReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Injects noise `delta tau^{2s}` at `tau = optimal_tau(delta)` into the transform of the
/// weighted phantom, inverts, unweights and fits the error exponent in `delta`.
pub fn stability_experiment(cfg: &StabilityConfig) -> Result<StabilityReport> {
    let setup = StabilitySetup::new(cfg)?;
    let gamma = predicted_gamma(cfg.s, cfg.t_m)?;
    let norm2 = setup.operator_norm.powi(2);
    let jobs: Vec<(usize, u64)> = (0..cfg.deltas.len())
        .flat_map(|i| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();
    let levels = cfg
        .deltas
        .iter()
        .map(|&d| {
            let tau = optimal_tau(d, cfg.s)?;
            Ok((tau, d * tau.powf(2.0 * cfg.s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let runs = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let noise = levels[i].1;
            let (q, its) = setup.recover(noise, cfg.lambda_factor * noise * norm2, seed, cfg.iterations)?;
            Ok((setup.relative_error(&q)?, its))
        })
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<StabilityCell> = cfg
        .deltas
        .iter()
        .enumerate()
        .map(|(i, &delta)| {
            let mine: Vec<(f64, usize)> = jobs
                .iter()
                .zip(&runs)
                .filter(|(j, _)| j.0 == i)
                .map(|(_, r)| *r)
                .collect();
            let errors: Vec<f64> = mine.iter().map(|r| r.0).collect();
            let (tau, noise) = levels[i];
            StabilityCell {
                delta,
                tau,
                noise_level: noise,
                lambda: cfg.lambda_factor * noise * norm2,
                median_error: median(&errors),
                errors,
                cg_iterations: mine.iter().map(|r| r.1).collect(),
            }
        })
        .collect();
    let (base, _) = setup.recover(0.0, cfg.baseline_lambda, 0, cfg.iterations)?;
    let baseline_error = setup.relative_error(&base)?;
    let fit = fit_log2_slope(
        &cells.iter().map(|c| c.delta).collect::<Vec<_>>(),
        &cells.iter().map(|c| c.median_error).collect::<Vec<_>>(),
    )?;
    let ratio = fit.slope / gamma;
    let config_text = toml::to_string(cfg).map_err(|e| Error::Format(e.to_string()))?;
    Ok(StabilityReport {
        config: cfg.clone(),
        config_hash: sha256_hex(config_text.as_bytes()),
        medium: setup.medium.descriptor(),
        grid: setup.grid.descriptor(),
        operator_norm: setup.operator_norm,
        baseline_error,
        fitted_exponent: fit.slope,
        fit,
        predicted_gamma: gamma,
        ratio,
        within_window: ratio >= cfg.gamma_window[0] && ratio <= cfg.gamma_window[1],
        cells,
        limitation: "delta is an injected noise proxy for the Cauchy-data distance; \
                     data are synthesized by the ray transform of the weighted phantom"
            .into(),
    })
}
