//! Transport along the rays of a [`PolarChart`]: closed-form amplitudes, an independent
//! Riccati ODE path, and the low-order phase correction.

use num_complex::Complex64;
use rayon::prelude::*;

use super::BoundaryAmplitude;
use crate::error::{Error, Result};
use crate::media::{ChartBase, ChartNode, ChartSampling, Medium, PolarChart};
use crate::spectral::Field;

/// Space dimension of every chart.
const N_DIM: f64 = 2.0;
/// Start of the point-source integration, where the Hessian is `e_perp e_perp^T / t`.
const POINT_START: f64 = 1e-6;
/// Substeps never exceed this fraction of the elapsed parameter near a point source.
const POINT_STEP_FRACTION: f64 = 0.02;

pub(crate) fn is_half(s: f64) -> bool {
    (s - 0.5).abs() < 1e-12
}

/// Right-hand side of `2 grad phi . grad a + b_s a = source` along the rays.
#[derive(Clone, Copy, Debug)]
pub enum TransportSource<'a> {
    Homogeneous,
    /// `-2 i r q a`, the coupling of `q` into the leading transport when `s = 1/2`.
    Potential,
    /// A given field `f`, sampled along the rays.
    Rhs(&'a Field),
    /// `-(i/s) q r^{2-2s} a_0` for the first correction `a_1` when `s > 1/2`; `a_0` is
    /// integrated alongside.
    FirstCorrection,
}

fn regime(operation: &'static str, s: f64, required: &'static str) -> Error {
    Error::Regime { operation, s, required }
}

impl TransportSource<'_> {
    fn check(&self, s: f64) -> Result<()> {
        match self {
            Self::Potential if !is_half(s) => Err(regime("potential transport", s, "s = 1/2")),
            Self::FirstCorrection if !(s > 0.5) => Err(regime("first amplitude correction", s, "s in (1/2, 1)")),
            _ => Ok(()),
        }
    }
}

type State = [f64; 11];

fn ode_rhs(medium: &Medium, source: &TransportSource, y: &State) -> State {
    let s = medium.s();
    let x = [y[0], y[1]];
    let xi = [y[2], y[3]];
    let (h11, h12, h22) = (y[4], y[5], y[6]);
    let (r, g, k) = medium.ray_coefficients(x);
    let xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    let hxx = h11 * xi[0] * xi[0] + 2.0 * h12 * xi[0] * xi[1] + h22 * xi[1] * xi[1];
    let b = h11 + h22 + (2.0 * s - 2.0) * hxx / xi2;
    let mut dl = Complex64::new(-0.5 * b, 0.0);
    let w = Complex64::new(y[9], y[10]);
    let mut dw = -0.5 * b * w;
    match source {
        TransportSource::Homogeneous => {}
        TransportSource::Potential => dl += Complex64::new(0.0, -r * medium.q(x)),
        TransportSource::Rhs(f) => dw += 0.5 * f.sample(x),
        TransportSource::FirstCorrection => {
            let a0 = Complex64::new(y[7], y[8]).exp();
            dw += Complex64::new(0.0, -0.5 / s) * medium.q(x) * r.powf(2.0 - 2.0 * s) * a0;
        }
    }
    [
        xi[0],
        xi[1],
        r * g[0],
        r * g[1],
        k[0] - (h11 * h11 + h12 * h12),
        k[1] - h12 * (h11 + h22),
        k[2] - (h12 * h12 + h22 * h22),
        dl.re,
        dl.im,
        dw.re,
        dw.im,
    ]
}

fn initial_state(medium: &Medium, base: &ChartBase, n0: &ChartNode, u: f64) -> (State, f64) {
    let (r0, g, _) = medium.ray_coefficients(n0.x);
    match base {
        ChartBase::Point { .. } => {
            let t0 = POINT_START;
            let e = [-u.sin(), u.cos()];
            let l0 = N_DIM / 8.0 - 0.5 * (r0 * r0 * t0).ln();
            let mut y = [0.0; 11];
            y[0] = n0.x[0] + n0.xi[0] * t0;
            y[1] = n0.x[1] + n0.xi[1] * t0;
            y[2] = n0.xi[0] + r0 * g[0] * t0;
            y[3] = n0.xi[1] + r0 * g[1] * t0;
            y[4] = e[0] * e[0] / t0;
            y[5] = e[0] * e[1] / t0;
            y[6] = e[1] * e[1] / t0;
            y[7] = l0;
            (y, t0)
        }
        ChartBase::Plane { direction: a, .. } => {
            let e = [-a[1], a[0]];
            let da = g[0] * a[0] + g[1] * a[1];
            let de = g[0] * e[0] + g[1] * e[1];
            let mut y = [0.0; 11];
            y[0] = n0.x[0];
            y[1] = n0.x[1];
            y[2] = n0.xi[0];
            y[3] = n0.xi[1];
            y[4] = da * a[0] * a[0] + de * 2.0 * a[0] * e[0];
            y[5] = da * a[0] * a[1] + de * (a[0] * e[1] + a[1] * e[0]);
            y[6] = da * a[1] * a[1] + de * 2.0 * a[1] * e[1];
            y[7] = N_DIM / 8.0;
            (y, 0.0)
        }
    }
}

fn node_value(source: &TransportSource, b: f64, y: &State) -> Complex64 {
    let a0 = Complex64::new(y[7], y[8]).exp();
    let w = Complex64::new(y[9], y[10]);
    match source {
        TransportSource::Rhs(_) => b * a0 + w,
        TransportSource::FirstCorrection => b * w,
        _ => b * a0,
    }
}

/// Integrates the transport ODE with a Riccati equation for `Hess phi` along every chart ray
/// and returns one value per chart node (zero at a point base, where `a` is singular).
pub fn transport_nodes(
    medium: &Medium,
    chart: &PolarChart,
    boundary: &BoundaryAmplitude,
    source: TransportSource,
) -> Result<Vec<Complex64>> {
    boundary.validate()?;
    source.check(medium.s())?;
    let n_t = chart.n_t();
    let point = chart.base().is_point();
    let f = |y: &State| ode_rhs(medium, &source, y);
    let rays: Vec<Vec<Complex64>> = (0..chart.n_rays())
        .into_par_iter()
        .map(|i| {
            let u = chart.u(i);
            let b = boundary.eval(u);
            let (mut y, mut t) = initial_state(medium, chart.base(), chart.node(i, 0), u);
            let mut out = Vec::with_capacity(n_t);
            out.push(if point {
                Complex64::new(0.0, 0.0)
            } else {
                node_value(&source, b, &y)
            });
            for k in 1..n_t {
                let target = chart.t(k);
                while target - t > 1e-15 * target {
                    let mut h = target - t;
                    if point {
                        h = h.min(POINT_STEP_FRACTION * t);
                    }
                    y = crate::media::ray::rk4(&y, h, &f);
                    t += h;
                }
                t = target;
                out.push(node_value(&source, b, &y));
            }
            out
        })
        .collect();
    let values: Vec<Complex64> = rays.into_iter().flatten().collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite {
            operation: "transport_nodes",
        });
    }
    Ok(values)
}

pub fn solve_transport_along_rays(
    medium: &Medium,
    chart: &PolarChart,
    sampling: &ChartSampling,
    boundary: &BoundaryAmplitude,
    source: TransportSource,
) -> Result<Field> {
    let nodes = transport_nodes(medium, chart, boundary, source)?;
    chart.resample(sampling, &nodes)
}

/// Cumulative integral of `g` along ray `i` by the cubic Hermite rule; `g` returns the integrand
/// and its parameter derivative at a node.
fn hermite_cumulative(chart: &PolarChart, i: usize, g: impl Fn(&ChartNode) -> (f64, f64)) -> Vec<f64> {
    let dt = chart.dt();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(chart.n_t());
    out.push(0.0);
    let mut prev = g(chart.node(i, 0));
    for k in 1..chart.n_t() {
        let cur = g(chart.node(i, k));
        acc += 0.5 * dt * (prev.0 + cur.0) + dt * dt / 12.0 * (prev.1 - cur.1);
        out.push(acc);
        prev = cur;
    }
    out
}

/// `J_q = -int q r dt`, the phase the potential adds to `a_0` when `s = 1/2`.
fn potential_phase(medium: &Medium, chart: &PolarChart, i: usize) -> Vec<f64> {
    hermite_cumulative(chart, i, |n| {
        let qj = medium.q_profile().jet(n.x);
        let rj = medium.r_profile().jet(n.x);
        let d = [
            rj.value * qj.grad[0] + qj.value * rj.grad[0],
            rj.value * qj.grad[1] + qj.value * rj.grad[1],
        ];
        (qj.value * rj.value, d[0] * n.xi[0] + d[1] * n.xi[1])
    })
    .into_iter()
    .map(|v| -v)
    .collect()
}

/// `J_q = -int q r dt` from the base at every chart node.
pub fn potential_phase_nodes(medium: &Medium, chart: &PolarChart) -> Vec<Complex64> {
    (0..chart.n_rays())
        .into_par_iter()
        .map(|i| potential_phase(medium, chart, i))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .map(|v| Complex64::new(v, 0.0))
        .collect()
}

/// `a_0 = b e^{n/8} (r/r_0)^{1-s} (J/J_0)^{-1/2} e^{i J_q}` at every chart node, where `J` is
/// the chart Jacobian; `J_q` is included when `with_potential`.
pub fn closed_form_nodes(
    medium: &Medium,
    chart: &PolarChart,
    boundary: &BoundaryAmplitude,
    with_potential: bool,
) -> Result<Vec<Complex64>> {
    boundary.validate()?;
    let s = medium.s();
    let point = chart.base().is_point();
    let rays: Vec<Vec<Complex64>> = (0..chart.n_rays())
        .into_par_iter()
        .map(|i| {
            let b = boundary.eval(chart.u(i)) * (N_DIM / 8.0).exp();
            let r0 = medium.r(chart.node(i, 0).x);
            let jn = chart.jacobian_norm(i);
            let jq = if with_potential {
                potential_phase(medium, chart, i)
            } else {
                vec![0.0; chart.n_t()]
            };
            (0..chart.n_t())
                .map(|k| {
                    if point && k == 0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let n = chart.node(i, k);
                    let mag = b * (medium.r(n.x) / r0).powf(1.0 - s) * (n.jacobian() / jn).powf(-0.5);
                    Complex64::from_polar(mag, jq[k])
                })
                .collect()
        })
        .collect();
    let values: Vec<Complex64> = rays.into_iter().flatten().collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite {
            operation: "closed_form_nodes",
        });
    }
    Ok(values)
}

/// Closed-form leading amplitude on the grid (potential phase included when `s = 1/2`).
pub fn polar_amplitude_closed_form(
    chart: &PolarChart,
    sampling: &ChartSampling,
    medium: &Medium,
    boundary: &BoundaryAmplitude,
) -> Result<Field> {
    let s = medium.s();
    if !(0.5..1.0).contains(&s) {
        return Err(regime("polar_amplitude_closed_form", s, "s in [1/2, 1)"));
    }
    let nodes = closed_form_nodes(medium, chart, boundary, is_half(s))?;
    chart.resample(sampling, &nodes)
}

/// Leading phase `rho` (the eikonal distance from the base) at every node.
pub fn phase_nodes(chart: &PolarChart) -> Vec<Complex64> {
    chart.nodes().iter().map(|n| Complex64::new(n.rho, 0.0)).collect()
}

/// `phi_1` at every node: `d phi_1 / dt = -q r^{2-2s} / (2s)`, zero at the base.
pub fn phase_correction_nodes(medium: &Medium, chart: &PolarChart) -> Result<Vec<Complex64>> {
    let s = medium.s();
    if !(s > 0.0 && s < 0.5) {
        return Err(regime("phase_correction_phi1", s, "s in (0, 1/2)"));
    }
    let c = -0.5 / s;
    let p = 2.0 - 2.0 * s;
    let rays: Vec<Vec<f64>> = (0..chart.n_rays())
        .into_par_iter()
        .map(|i| {
            hermite_cumulative(chart, i, |n| {
                let qj = medium.q_profile().jet(n.x);
                let rj = medium.r_profile().jet(n.x);
                let rp = rj.value.powf(p);
                let d = [
                    qj.grad[0] * rp + qj.value * p * rp / rj.value * rj.grad[0],
                    qj.grad[1] * rp + qj.value * p * rp / rj.value * rj.grad[1],
                ];
                (c * qj.value * rp, c * (d[0] * n.xi[0] + d[1] * n.xi[1]))
            })
        })
        .collect();
    Ok(rays.into_iter().flatten().map(|v| Complex64::new(v, 0.0)).collect())
}

pub fn phase_correction_phi1(medium: &Medium, chart: &PolarChart, sampling: &ChartSampling) -> Result<Field> {
    let nodes = phase_correction_nodes(medium, chart)?;
    chart.resample(sampling, &nodes)
}
