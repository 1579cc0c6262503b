use num_complex::Complex64;

use super::Phase;
use crate::error::{Error, Result};
use crate::media::Medium;
use crate::spectral::{gradient, Field, Grid, Point};

/// `|grad phi_0|` may not drop below this fraction of `inf r` on `Omega`.
pub const DEGENERACY_FRACTION: f64 = 0.5;

/// Grid samples of the quantities entering `2 grad phi . grad a + b_s a`.
#[derive(Clone, Debug)]
pub struct TransportCoefficients {
    pub b_s: Field,
    pub grad_phi: [Field; 2],
    pub norm_grad_phi: Field,
    /// `(Hess phi grad phi) . grad phi / |grad phi|^2`
    pub hessian_term: Field,
    pub laplacian_phi: Field,
}

struct PointCoefficients {
    grad: [f64; 2],
    norm: f64,
    hessian_term: f64,
    laplacian: f64,
}

fn point_coefficients(phase: &Phase, x: Point) -> PointCoefficients {
    let j = phase.jet(x);
    let g = j.grad;
    let n2 = g[0] * g[0] + g[1] * g[1];
    let hgg = j.hess[0] * g[0] * g[0] + 2.0 * j.hess[1] * g[0] * g[1] + j.hess[2] * g[1] * g[1];
    PointCoefficients {
        grad: g,
        norm: n2.sqrt(),
        hessian_term: hgg / n2,
        laplacian: j.hess[0] + j.hess[2],
    }
}

fn real_field(grid: &Grid, v: Vec<f64>) -> Result<Field> {
    Field::new(grid.clone(), v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

/// Fails with a degenerate-phase error if `|grad phi_0|` is too small somewhere on `Omega`.
pub fn check_nondegenerate(phase: &Phase, medium: &Medium, grid: &Grid) -> Result<()> {
    let c0 = DEGENERACY_FRACTION * medium.c0();
    for k in medium.omega().mask(grid).indices() {
        let x = grid.point(k);
        let pc = point_coefficients(phase, x);
        if !(pc.norm >= c0) {
            return Err(Error::DegeneratePhase {
                norm: pc.norm,
                c0,
                point: x,
            });
        }
    }
    Ok(())
}

pub fn transport_coefficients(phase: &Phase, medium: &Medium, grid: &Grid) -> Result<TransportCoefficients> {
    check_nondegenerate(phase, medium, grid)?;
    let s = medium.s();
    let n = grid.len();
    let (mut g0, mut g1, mut nrm, mut ht, mut lap, mut b) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    for k in 0..n {
        let pc = point_coefficients(phase, grid.point(k));
        let bs = pc.laplacian + (2.0 * s - 2.0) * pc.hessian_term;
        if [pc.grad[0], pc.grad[1], pc.norm, pc.hessian_term, pc.laplacian, bs]
            .iter()
            .all(|v| v.is_finite())
        {
            g0[k] = pc.grad[0];
            g1[k] = pc.grad[1];
            nrm[k] = pc.norm;
            ht[k] = pc.hessian_term;
            lap[k] = pc.laplacian;
            b[k] = bs;
        }
    }
    Ok(TransportCoefficients {
        b_s: real_field(grid, b)?,
        grad_phi: [real_field(grid, g0)?, real_field(grid, g1)?],
        norm_grad_phi: real_field(grid, nrm)?,
        hessian_term: real_field(grid, ht)?,
        laplacian_phi: real_field(grid, lap)?,
    })
}

/// `L_{1;0} a = -i s |grad phi|^{2s-2} (2 grad phi . grad a + b_s a)`.
pub fn apply_l10(phase: &Phase, medium: &Medium, a: &Field) -> Result<Field> {
    let grid = a.grid().clone();
    let c = transport_coefficients(phase, medium, &grid)?;
    let s = medium.s();
    let ga = gradient(a)?;
    let out = (0..grid.len())
        .map(|k| {
            let n = c.norm_grad_phi.at(k).re;
            if n == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let dir = c.grad_phi[0].at(k).re * ga[0].at(k) + c.grad_phi[1].at(k).re * ga[1].at(k);
            let inner = 2.0 * dir + c.b_s.at(k).re * a.at(k);
            Complex64::new(0.0, -s) * n.powf(2.0 * s - 2.0) * inner
        })
        .collect();
    Field::checked(grid, out, "apply_l10")
}

/// Polar form `-2 i s r^{2s} (d_rho a + r^{-2} Delta phi a / 2 - (1 - s) r^{-1} (d_rho r) a)`
/// with `d_rho = r^{-2} grad phi . grad` and `r` taken from the medium.
pub fn apply_l10_polar(phase: &Phase, medium: &Medium, a: &Field) -> Result<Field> {
    let grid = a.grid().clone();
    check_nondegenerate(phase, medium, &grid)?;
    let s = medium.s();
    let ga = gradient(a)?;
    let out = (0..grid.len())
        .map(|k| {
            let x = grid.point(k);
            let j = phase.jet(x);
            let rj = medium.r_profile().jet(x);
            let r = rj.value;
            let r2 = r * r;
            let d_a = (j.grad[0] * ga[0].at(k) + j.grad[1] * ga[1].at(k)) / r2;
            let d_r = (j.grad[0] * rj.grad[0] + j.grad[1] * rj.grad[1]) / r2;
            let lap = j.hess[0] + j.hess[2];
            let v = Complex64::new(0.0, -2.0 * s)
                * r.powf(2.0 * s)
                * (d_a + (0.5 * lap / r2 - (1.0 - s) * d_r / r) * a.at(k));
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::checked(grid, out, "apply_l10_polar")
}
