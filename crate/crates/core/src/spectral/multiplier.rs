use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fft, Field, Grid, Mask};
use crate::error::{Error, Result};

/// One monomial `coefficient * |xi|^(2 * xi_sq_power) * (alpha . xi)^alpha_xi_power`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coefficient: f64,
    pub xi_sq_power: u32,
    pub alpha_xi_power: u32,
}

/// Fourier symbols understood by [`apply_multiplier`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MultiplierSpec {
    /// `|xi|^(2s)`
    FractionalLaplacian { s: f64 },
    /// `<h xi>^alpha = (1 + h^2 |xi|^2)^(alpha/2)`
    BracketPower { alpha: f64, h: f64 },
    /// `|xi|^(2s) - tau^(2s)`
    HelmholtzConst { tau: f64, s: f64 },
    /// Polynomial in `|xi|^2` and `alpha . xi`.
    Polynomial { direction: [f64; 2], terms: Vec<PolyTerm> },
}

fn check_order(s: f64) -> Result<()> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "s",
            value: s,
            range: "(0, 1]",
        })
    }
}

impl MultiplierSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::FractionalLaplacian { s } => check_order(*s),
            Self::BracketPower { alpha, h } => {
                if !alpha.is_finite() {
                    return Err(Error::invalid("bracket power must be finite"));
                }
                if !(h.is_finite() && *h > 0.0) {
                    return Err(Error::Domain {
                        what: "h",
                        value: *h,
                        range: "(0, inf)",
                    });
                }
                Ok(())
            }
            Self::HelmholtzConst { tau, s } => {
                check_order(*s)?;
                if !(tau.is_finite() && *tau > 0.0) {
                    return Err(Error::Domain {
                        what: "tau",
                        value: *tau,
                        range: "(0, inf)",
                    });
                }
                Ok(())
            }
            Self::Polynomial { direction, terms } => {
                if direction.iter().any(|d| !d.is_finite()) {
                    return Err(Error::invalid("polynomial direction must be finite"));
                }
                if terms.iter().any(|t| !t.coefficient.is_finite()) {
                    return Err(Error::invalid("polynomial coefficients must be finite"));
                }
                Ok(())
            }
        }
    }

    /// Symbol value at the frequency `k`.
    pub fn symbol(&self, k: [f64; 2]) -> f64 {
        let k2 = k[0] * k[0] + k[1] * k[1];
        match self {
            Self::FractionalLaplacian { s } => {
                if k2 == 0.0 {
                    0.0
                } else {
                    k2.powf(*s)
                }
            }
            Self::BracketPower { alpha, h } => (1.0 + h * h * k2).powf(0.5 * alpha),
            Self::HelmholtzConst { tau, s } => {
                let lap = if k2 == 0.0 { 0.0 } else { k2.powf(*s) };
                lap - tau.powf(2.0 * s)
            }
            Self::Polynomial { direction, terms } => {
                let ak = direction[0] * k[0] + direction[1] * k[1];
                terms
                    .iter()
                    .map(|t| t.coefficient * k2.powi(t.xi_sq_power as i32) * ak.powi(t.alpha_xi_power as i32))
                    .sum()
            }
        }
    }
}

/// Frequency vector of the flat spectral slot `idx`.
pub(crate) fn frequency_table(grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let k0 = grid.wavenumbers(0);
    let k1 = if grid.dim() == 2 {
        grid.wavenumbers(1)
    } else {
        vec![0.0]
    };
    (k0, k1)
}

/// Multiplies the spectrum of `u` by `symbol(k)` and transforms back.
pub(crate) fn apply_symbol(
    u: &Field,
    symbol: impl Fn([f64; 2]) -> Complex64 + Sync,
    operation: &'static str,
) -> Result<Field> {
    let grid = u.grid().clone();
    let (k0, k1) = frequency_table(&grid);
    let n1 = k1.len();
    let mut data = u.values().to_vec();
    fft::forward(&grid, &mut data);
    data.par_chunks_mut(n1).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= symbol([k0[i], k1[j]]);
        }
    });
    fft::inverse(&grid, &mut data);
    Field::checked(grid, data, operation)
}

pub fn apply_multiplier(u: &Field, m: &MultiplierSpec) -> Result<Field> {
    m.validate()?;
    let (k0, k1) = frequency_table(u.grid());
    for &a in &k0 {
        for &b in &k1 {
            if !m.symbol([a, b]).is_finite() {
                let frequency = if u.grid().dim() == 1 { vec![a] } else { vec![a, b] };
                return Err(Error::NonFiniteSymbol { frequency });
            }
        }
    }
    apply_symbol(u, |k| Complex64::new(m.symbol(k), 0.0), "apply_multiplier")
}

pub fn frac_laplacian(u: &Field, s: f64) -> Result<Field> {
    check_order(s)?;
    apply_multiplier(u, &MultiplierSpec::FractionalLaplacian { s })
}

/// `|| <hD>^alpha u ||_{L^2}`, integrated over `mask` when given.
pub fn sobolev_norm_scl(u: &Field, alpha: f64, h: f64, mask: Option<&Mask>) -> Result<f64> {
    if alpha == 0.0 {
        MultiplierSpec::BracketPower { alpha, h }.validate()?;
        return Ok(u.norm_l2(mask));
    }
    let v = apply_multiplier(u, &MultiplierSpec::BracketPower { alpha, h })?;
    Ok(v.norm_l2(mask))
}

/// Smallest `| |k|^{2s} - tau^{2s} |` over the retained frequencies.
pub fn resonance_gap(grid: &Grid, tau: f64, s: f64) -> f64 {
    let m = MultiplierSpec::HelmholtzConst { tau, s };
    let m = &m;
    let (k0, k1) = frequency_table(grid);
    k0.iter()
        .flat_map(|&a| k1.iter().map(move |&b| m.symbol([a, b]).abs()))
        .fold(f64::INFINITY, f64::min)
}

pub fn default_resonance_guard(tau: f64, s: f64) -> f64 {
    1e-6 * tau.powf(2.0 * s)
}

/// Nudges `tau` by one part in 10^4 until the resonance guard holds.
pub fn jitter_tau(grid: &Grid, tau: f64, s: f64) -> f64 {
    let mut t = tau;
    for _ in 0..16 {
        if resonance_gap(grid, t, s) >= default_resonance_guard(t, s) {
            return t;
        }
        t *= 1.0 + 1e-4;
    }
    t
}

/// Exact torus inverse of `(-Delta)^s - tau^{2s}`.
pub fn solve_const_helmholtz(f: &Field, tau: f64, s: f64, guard: Option<f64>) -> Result<Field> {
    let m = MultiplierSpec::HelmholtzConst { tau, s };
    m.validate()?;
    let guard = guard.unwrap_or_else(|| default_resonance_guard(tau, s));
    let grid = f.grid();
    let (k0, k1) = frequency_table(grid);
    let mut gap = f64::INFINITY;
    let mut offending = Vec::new();
    for &a in &k0 {
        for &b in &k1 {
            let v = m.symbol([a, b]).abs();
            gap = gap.min(v);
            if v < guard && offending.len() < 16 {
                offending.push(if grid.dim() == 1 { vec![a] } else { vec![a, b] });
            }
        }
    }
    if gap < guard {
        return Err(Error::Resonance {
            tau,
            gap,
            guard,
            offending,
        });
    }
    apply_symbol(f, |k| Complex64::new(1.0 / m.symbol(k), 0.0), "solve_const_helmholtz")
}

/// Spectral partial derivative along `axis`.
pub fn derivative(u: &Field, axis: usize) -> Result<Field> {
    if axis >= u.grid().dim() {
        return Ok(Field::zeros(u.grid()));
    }
    apply_symbol(u, |k| Complex64::new(0.0, k[axis]), "derivative")
}

pub fn gradient(u: &Field) -> Result<[Field; 2]> {
    Ok([derivative(u, 0)?, derivative(u, 1)?])
}

pub fn laplacian(u: &Field) -> Result<Field> {
    apply_symbol(u, |k| Complex64::new(-(k[0] * k[0] + k[1] * k[1]), 0.0), "laplacian")
}

/// `[d11, d12, d22]`.
pub fn hessian(u: &Field) -> Result<[Field; 3]> {
    Ok([
        apply_symbol(u, |k| Complex64::new(-k[0] * k[0], 0.0), "hessian")?,
        apply_symbol(u, |k| Complex64::new(-k[0] * k[1], 0.0), "hessian")?,
        apply_symbol(u, |k| Complex64::new(-k[1] * k[1], 0.0), "hessian")?,
    ])
}

/// `F` with `d F / d x_axis = u` that vanishes on the first grid row along `axis`.
///
/// The mean of `u` along each line contributes the ramp `mean * (x - x_start)`.
pub fn cumulative_integral(u: &Field, axis: usize) -> Result<Field> {
    let grid = u.grid().clone();
    if axis >= grid.dim() {
        return Err(Error::invalid(format!("axis {axis} exceeds grid dimension")));
    }
    let anti = apply_symbol(
        u,
        |k| {
            if k[axis] == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / k[axis])
            }
        },
        "cumulative_integral",
    )?;
    let sizes = [grid.sizes()[0], if grid.dim() == 2 { grid.sizes()[1] } else { 1 }];
    let n_line = sizes[axis];
    let n_other = sizes[1 - axis];
    let flat = |along: usize, across: usize| {
        if axis == 0 {
            along * sizes[1] + across
        } else {
            across * sizes[1] + along
        }
    };
    let x_start = grid.coordinate(axis, 0);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for c in 0..n_other {
        let mean = (0..n_line).map(|a| u.at(flat(a, c))).sum::<Complex64>() / n_line as f64;
        let first = anti.at(flat(0, c));
        for a in 0..n_line {
            let x = grid.coordinate(axis, a) - x_start;
            out[flat(a, c)] = anti.at(flat(a, c)) - first + mean * x;
        }
    }
    Field::checked(grid, out, "cumulative_integral")
}

/// Convolution with a unit-mass Gaussian `exp(-|x|^2 / width^2)`.
pub fn mollify(u: &Field, width: f64) -> Result<Field> {
    let c = 0.25 * width * width;
    apply_symbol(
        u,
        |k| Complex64::new((-c * (k[0] * k[0] + k[1] * k[1])).exp(), 0.0),
        "mollify",
    )
}
