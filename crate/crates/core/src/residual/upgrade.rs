use serde::{Deserialize, Serialize};

use super::operator::apply_helmholtz;
use crate::ansatz::{GOAnsatz, Regime};
use crate::error::{Error, Result};
use crate::media::Medium;
use crate::smooth::smooth_plateau;
use crate::spectral::{sobolev_norm_scl, solve_const_helmholtz, Field};

/// Inner and outer offsets from `Omega` of the smooth window that localises the upgrade source.
pub const SOURCE_WINDOW: (f64, f64) = (0.1, 0.4);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpgradeSummary {
    pub tau: f64,
    /// `|| L u_M ||_{L^2(Omega)}`
    pub residual_before: f64,
    /// `|| L (u_M + v) ||_{L^2(Omega)}`
    pub residual_after: f64,
    /// `|| v ||_{H^s_scl}` on the torus.
    pub correction_norm: f64,
    /// `|| u_M ||_{H^s_scl}` on the torus.
    pub ansatz_norm: f64,
}

impl UpgradeSummary {
    pub fn ratio(&self) -> f64 {
        self.correction_norm / self.ansatz_norm
    }
}

/// Exact solution on `Omega` from a constant-coefficient ansatz: `v` solves
/// `((-Delta)^s - tau^{2s}) v = -w L u_M` on the torus, where `w` is a smooth window equal to 1
/// on `Omega`.
pub fn upgrade_const(ansatz: &GOAnsatz, medium: &Medium, tau: f64) -> Result<(Field, UpgradeSummary)> {
    if ansatz.regime() != Regime::ConstCoef {
        return Err(Error::invalid("upgrade needs a constant-coefficient ansatz"));
    }
    if !medium.has_constant_r() || !medium.q_vanishes() || (medium.r([0.0, 0.0]) - 1.0).abs() > 0.0 {
        return Err(Error::invalid("upgrade needs r = 1 and q = 0"));
    }
    let s = medium.s();
    let u = ansatz.evaluate(tau)?;
    let grid = u.grid().clone();
    let lu = apply_helmholtz(medium, &u, tau)?;
    let omega = medium.omega();
    let (wi, wo) = SOURCE_WINDOW;
    let f = lu.map_with_point(|x, v| -v * smooth_plateau(omega.signed_distance(x), wi, wo))?;
    let v = solve_const_helmholtz(&f, tau, s, None)?;
    let exact = u.add(&v)?;
    let mask = omega.mask(&grid);
    let after = apply_helmholtz(medium, &exact, tau)?;
    let h = 1.0 / tau;
    let summary = UpgradeSummary {
        tau,
        residual_before: lu.norm_l2(Some(&mask)),
        residual_after: after.norm_l2(Some(&mask)),
        correction_norm: sobolev_norm_scl(&v, s, h, None)?,
        ansatz_norm: sobolev_norm_scl(&u, s, h, None)?,
    };
    Ok((exact, summary))
}
