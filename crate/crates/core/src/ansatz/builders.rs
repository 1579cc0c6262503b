use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::{box_cutoff, bump_cutoff};
use super::go::{manifest, AmplitudeTerm, GOAnsatz, PhaseTerm, Regime};
use super::lattice::exponent_lattice;
use crate::error::{Error, Result};
use crate::media::{build_polar_chart, ChartBase, ChartOptions, ChartSampling, Medium, PolarChart};
use crate::spectral::{cumulative_integral, Field, Grid};
use crate::transport::{
    axis_of, closed_form_nodes, const_coef_amplitudes, is_half, phase_correction_phi1, phase_nodes,
    polar_amplitude_closed_form, solve_transport_along_rays, BoundaryAmplitude, ConstCoefSymbolTable, TransportSource,
};

const N_DIM: f64 = 2.0;

/// Where the rays of `phi_0` come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RayGeometry {
    /// Straight rays `phi_0 = r alpha . x` through a medium with constant `r`; transports are
    /// integrated along grid rows, so `direction` must be a coordinate axis whenever a source
    /// is present.
    Plane { direction: [f64; 2] },
    /// Rays of a polar chart traced through the medium.
    Chart {
        base: ChartBase,
        n_rays: usize,
        dt: f64,
        budget: f64,
    },
}

impl RayGeometry {
    pub fn plane(direction: [f64; 2]) -> Self {
        Self::Plane { direction }
    }

    pub fn chart(base: ChartBase, opts: ChartOptions) -> Self {
        Self::Chart {
            base,
            n_rays: opts.n_rays,
            dt: opts.dt,
            budget: opts.budget,
        }
    }

    fn descriptor(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

fn regime_err(operation: &'static str, s: f64, required: &'static str) -> Error {
    Error::Regime { operation, s, required }
}

fn unit(d: [f64; 2]) -> Result<[f64; 2]> {
    let n = d[0].hypot(d[1]);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("plane direction must be non-zero"));
    }
    Ok([d[0] / n, d[1] / n])
}

/// Fields shared by both variable-medium builders.
struct Pieces {
    phi0: Field,
    phi1: Option<Field>,
    a0: Field,
    a1: Option<Field>,
    bound: [f64; 2],
}

fn plane_pieces(
    medium: &Medium,
    grid: &Grid,
    direction: [f64; 2],
    boundary: &BoundaryAmplitude,
    first_correction: bool,
    phi1: bool,
) -> Result<Pieces> {
    if !medium.has_constant_r() {
        return Err(Error::invalid("plane geometry needs a medium with constant r"));
    }
    boundary.validate()?;
    let s = medium.s();
    let al = unit(direction)?;
    let r = medium.r([0.0, 0.0]);
    let e = [-al[1], al[0]];
    let phi0 = Field::from_real_fn(grid, |x| r * (al[0] * x[0] + al[1] * x[1]))?;
    let en = (N_DIM / 8.0).exp();
    let base = Field::from_real_fn(grid, |x| en * boundary.eval(e[0] * x[0] + e[1] * x[1]))?;
    let q = medium.q_field(grid)?;
    let needs_axis = !medium.q_vanishes() && (is_half(s) || first_correction || phi1);
    let axis = if needs_axis { Some(axis_of(al)?) } else { None };
    let a0 = match axis {
        Some(ax) if is_half(s) => {
            let jq = cumulative_integral(&q, ax)?;
            base.zip_map(&jq, |b, j| b * (Complex64::new(0.0, -1.0) * j).exp())?
        }
        _ => base,
    };
    let a1 = if first_correction {
        Some(match axis {
            Some(ax) => {
                let c = Complex64::new(0.0, -r.powf(1.0 - 2.0 * s) / (2.0 * s));
                cumulative_integral(&q.mul(&a0)?.scale(c)?, ax)?
            }
            None => Field::zeros(grid),
        })
    } else {
        None
    };
    let phi1 = if phi1 {
        Some(match axis {
            Some(ax) => cumulative_integral(&q.scale_real(-r.powf(1.0 - 2.0 * s) / (2.0 * s))?, ax)?,
            None => Field::zeros(grid),
        })
    } else {
        None
    };
    Ok(Pieces {
        phi0,
        phi1,
        a0,
        a1,
        bound: [r * al[0].abs(), r * al[1].abs()],
    })
}

fn chart_of(medium: &Medium, geometry: &RayGeometry) -> Result<PolarChart> {
    match geometry {
        RayGeometry::Chart {
            base,
            n_rays,
            dt,
            budget,
        } => build_polar_chart(
            medium,
            base.clone(),
            ChartOptions {
                n_rays: *n_rays,
                dt: *dt,
                budget: *budget,
            },
        ),
        RayGeometry::Plane { .. } => Err(Error::invalid("not a chart geometry")),
    }
}

fn chart_pieces(
    medium: &Medium,
    grid: &Grid,
    geometry: &RayGeometry,
    margin: f64,
    boundary: &BoundaryAmplitude,
    first_correction: bool,
    phi1: bool,
) -> Result<Pieces> {
    let s = medium.s();
    let chart = chart_of(medium, geometry)?;
    let sampling: ChartSampling = chart.locate(grid, &medium.omega().dilated(2.0 * margin))?;
    let phi0 = chart.resample(&sampling, &phase_nodes(&chart))?;
    let a0 = if s >= 0.5 {
        polar_amplitude_closed_form(&chart, &sampling, medium, boundary)?
    } else {
        chart.resample(&sampling, &closed_form_nodes(medium, &chart, boundary, false)?)?
    };
    let a1 = if first_correction {
        Some(if medium.q_vanishes() {
            Field::zeros(grid)
        } else {
            solve_transport_along_rays(medium, &chart, &sampling, boundary, TransportSource::FirstCorrection)?
        })
    } else {
        None
    };
    let phi1 = if phi1 {
        Some(phase_correction_phi1(medium, &chart, &sampling)?)
    } else {
        None
    };
    let rmax = sampling
        .coordinates()
        .map(|(k, _, _)| medium.r(grid.point(k)))
        .fold(0.0, f64::max);
    Ok(Pieces {
        phi0,
        phi1,
        a0,
        a1,
        bound: [rmax, rmax],
    })
}

fn pieces(
    medium: &Medium,
    grid: &Grid,
    geometry: &RayGeometry,
    margin: f64,
    boundary: &BoundaryAmplitude,
    first_correction: bool,
    phi1: bool,
) -> Result<Pieces> {
    match geometry {
        RayGeometry::Plane { direction } => plane_pieces(medium, grid, *direction, boundary, first_correction, phi1),
        RayGeometry::Chart { .. } => chart_pieces(medium, grid, geometry, margin, boundary, first_correction, phi1),
    }
}

fn assemble(
    regime: Regime,
    medium: &Medium,
    geometry: &RayGeometry,
    cutoff: Field,
    p: Pieces,
    lattice: Vec<f64>,
) -> Result<GOAnsatz> {
    let s = medium.s();
    let mut phases = vec![PhaseTerm {
        order: 0,
        field: p.phi0,
    }];
    if let Some(f) = p.phi1 {
        phases.push(PhaseTerm { order: 1, field: f });
    }
    let mut amplitudes = vec![AmplitudeTerm {
        exponent: 0.0,
        field: p.a0,
    }];
    if let Some(f) = p.a1 {
        let exponent = if is_half(s) { 1.0 } else { 2.0 * s - 1.0 };
        amplitudes.push(AmplitudeTerm { exponent, field: f });
    }
    let g = cutoff.grid().clone();
    let bound = p.bound.map(|b| b.max(f64::MIN_POSITIVE));
    let manifest = manifest(
        regime,
        s,
        &phases,
        &amplitudes,
        lattice,
        medium.descriptor(),
        geometry.descriptor(),
        &g,
    );
    Ok(GOAnsatz {
        regime,
        s,
        phases,
        amplitudes,
        cutoff,
        phase_gradient_bound: bound,
        manifest,
    })
}

/// Single-phase ansatz for `s in [1/2, 1)` with `m in {1, 2}` amplitudes.
///
/// `a_0` solves the homogeneous transport (with the potential phase when `s = 1/2`); for `m = 2`
/// and `s > 1/2`, `a_1` at exponent `2s - 1` solves `2 grad phi . grad a_1 + b_s a_1 =
/// -(i/s) q r^{2-2s} a_0`. For `s = 1/2` the second amplitude is zero.
pub fn build_high_s(
    medium: &Medium,
    grid: &Grid,
    geometry: &RayGeometry,
    boundary: &BoundaryAmplitude,
    m: usize,
    margin: f64,
) -> Result<GOAnsatz> {
    let s = medium.s();
    if !(0.5..1.0).contains(&s) {
        return Err(regime_err("build_high_s", s, "s in [1/2, 1)"));
    }
    if !(1..=2).contains(&m) {
        return Err(Error::invalid(format!(
            "high-s ansatz takes 1 or 2 amplitudes, got {m}"
        )));
    }
    let cutoff = bump_cutoff(grid, medium.omega(), margin)?;
    let mut p = pieces(medium, grid, geometry, margin, boundary, m == 2 && !is_half(s), false)?;
    if m == 2 && is_half(s) {
        p.a1 = Some(Field::zeros(grid));
    }
    let top = if is_half(s) { 1.0 } else { 2.0 * s - 1.0 };
    let lattice = exponent_lattice(s, top)?.entries().to_vec();
    assemble(Regime::HighS, medium, geometry, cutoff, p, lattice)
}

/// Ansatz for `s in (0, 1/2)`: phases `phi_0` and (when `with_phi1`) `phi_1`, amplitude `a_0`.
pub fn build_low_s(
    medium: &Medium,
    grid: &Grid,
    geometry: &RayGeometry,
    boundary: &BoundaryAmplitude,
    with_phi1: bool,
    margin: f64,
) -> Result<GOAnsatz> {
    let s = medium.s();
    if !(s > 0.0 && s < 0.5) {
        return Err(regime_err("build_low_s", s, "s in (0, 1/2)"));
    }
    let cutoff = bump_cutoff(grid, medium.omega(), margin)?;
    let p = pieces(medium, grid, geometry, margin, boundary, false, with_phi1)?;
    let lattice = exponent_lattice(s, 2.0 * s)?.entries().to_vec();
    assemble(Regime::LowS, medium, geometry, cutoff, p, lattice)
}

/// Layout of the constant-coefficient experiment: plane wave along `x_1`, `a_0 =
/// exp(-x_2^2 / width^2)`, cutoff and recursion window as box plateaus.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstCoefSetup {
    pub s: f64,
    pub m: usize,
    pub grid: Grid,
    pub a0_width: f64,
    pub cutoff_inner: [f64; 2],
    pub cutoff_outer: [f64; 2],
    pub window: [f64; 2],
}

impl ConstCoefSetup {
    /// Box `[-8, 8] x [-4, 4]`, `x_1` resolved for `tau_max` at 8 points per wavelength, sizes
    /// multiplied by `refine`.
    pub fn standard(s: f64, m: usize, tau_max: f64, refine: usize) -> Result<Self> {
        if refine == 0 || !refine.is_power_of_two() {
            return Err(Error::invalid("refinement factor must be a power of two"));
        }
        let n1 = Grid::size_for_wavenumber(16.0, tau_max, 8.0) * refine;
        let grid = Grid::new(vec![n1, 64 * refine], vec![16.0, 8.0], vec![-8.0, -4.0])?;
        Ok(Self {
            s,
            m,
            grid,
            a0_width: 0.5,
            cutoff_inner: [1.5, 1.5],
            cutoff_outer: [5.0, 3.5],
            window: [5.2, 7.5],
        })
    }
}

/// `u_M = chi e^{i tau x_1} sum_{nu <= M} tau^{-nu} a_nu` for `r = 1`, `q = 0`.
pub fn build_const_coef(setup: &ConstCoefSetup) -> Result<GOAnsatz> {
    let s = setup.s;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            what: "s",
            value: s,
            range: "(0, 1)",
        });
    }
    let g = &setup.grid;
    let table = ConstCoefSymbolTable::new(s, [1.0, 0.0], (setup.m + 2).max(2))?;
    let w2 = setup.a0_width * setup.a0_width;
    let a0 = Field::from_real_fn(g, |x| (-x[1] * x[1] / w2).exp())?;
    let (wi, wo) = (setup.window[0], setup.window[1]);
    let window = Field::from_real_fn(g, |x| crate::smooth::smooth_plateau(x[0].abs(), wi, wo))?;
    let higher = const_coef_amplitudes(&table, &a0, &window, setup.m)?;
    let cutoff = box_cutoff(g, setup.cutoff_inner, setup.cutoff_outer)?;
    let phi0 = Field::from_real_fn(g, |x| x[0])?;
    let mut amplitudes = vec![AmplitudeTerm {
        exponent: 0.0,
        field: a0,
    }];
    for (nu, f) in higher.into_iter().enumerate() {
        amplitudes.push(AmplitudeTerm {
            exponent: (nu + 1) as f64,
            field: f,
        });
    }
    let phases = vec![PhaseTerm { order: 0, field: phi0 }];
    let lattice = (0..=setup.m).map(|v| v as f64).collect();
    let medium = format!(
        "constant r=1 q=0 s={s} a0_width={} cutoff={:?}/{:?} window={:?}",
        setup.a0_width, setup.cutoff_inner, setup.cutoff_outer, setup.window
    );
    let manifest = manifest(
        Regime::ConstCoef,
        s,
        &phases,
        &amplitudes,
        lattice,
        medium,
        "plane x1".into(),
        g,
    );
    Ok(GOAnsatz {
        regime: Regime::ConstCoef,
        s,
        phases,
        amplitudes,
        cutoff,
        phase_gradient_bound: [1.0, f64::MIN_POSITIVE],
        manifest,
    })
}
