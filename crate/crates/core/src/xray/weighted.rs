use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::{Medium, PolarChart, SampledProfile, ScalarProfile};
use crate::spectral::{Field, Mask};
use crate::transport::{is_half, potential_phase_nodes};

const N_DIM: f64 = 2.0;

/// `Q = (q_1 - q_2) e^{n/4} r^{-2s} e^{i J(q_1 - q_2)}` on `Omega`, zero outside, together with
/// its constituents.
#[derive(Clone, Debug)]
pub struct WeightedPotential {
    pub q: Field,
    pub difference: Field,
    /// `e^{n/4}`, the squared boundary normalization of the leading amplitudes.
    pub f_weight: f64,
    /// `e^{i J(q_1 - q_2)}`; identically 1 unless `s = 1/2`.
    pub j_weight: Field,
    /// `r^{-2s}`.
    pub r_factor: Field,
    pub support: Mask,
}

/// Requires `q_1 = q_2` outside `Omega`. At `s = 1/2` the phase `J` is integrated along the rays
/// of `chart`, which must cover `Omega`.
pub fn weighted_potential(
    medium: &Medium,
    q1: &Field,
    q2: &Field,
    chart: Option<&PolarChart>,
) -> Result<WeightedPotential> {
    let s = medium.s();
    if s < 0.5 {
        return Err(Error::Regime {
            operation: "weighted_potential",
            s,
            required: "s in [1/2, 1)",
        });
    }
    let grid = q1.grid().clone();
    let difference = q1.sub(q2)?;
    let support = medium.omega().mask(&grid);
    let scale = q1.max_abs().max(q2.max_abs()).max(1.0);
    if (0..grid.len()).any(|k| !support.contains(k) && difference.at(k).norm() > 1e-12 * scale) {
        return Err(Error::Support("q_1 and q_2 differ outside Omega".into()));
    }
    let r_factor = medium
        .r_field(&grid)?
        .map(|r| Complex64::new(r.re.powf(-2.0 * s), 0.0))?;
    let j_weight = if is_half(s) && difference.max_abs() > 0.0 {
        let chart = chart.ok_or_else(|| Error::invalid("s = 1/2 needs a chart to integrate J along rays"))?;
        let dq = Medium::new(
            medium.r_profile().clone(),
            ScalarProfile::Sampled(SampledProfile::new(difference.clone())?),
            s,
            medium.omega().clone(),
        )?;
        let phase = potential_phase_nodes(&dq, chart);
        let sampling = chart.locate(&grid, medium.omega())?;
        let nodes: Vec<Complex64> = phase.iter().map(|j| Complex64::from_polar(1.0, j.re)).collect();
        let located = chart.resample(&sampling, &nodes)?;
        located.map_with_point(|x, v| {
            if medium.omega().contains(x) {
                v / v.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })?
    } else {
        Field::constant(&grid, Complex64::new(1.0, 0.0))?
    };
    let f_weight = (N_DIM / 4.0).exp();
    let q = Field::new(
        grid.clone(),
        (0..grid.len())
            .map(|k| {
                if support.contains(k) {
                    difference.at(k) * f_weight * r_factor.at(k) * j_weight.at(k)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    )?;
    Ok(WeightedPotential {
        q,
        difference: difference.restricted(&support),
        f_weight,
        j_weight,
        r_factor,
        support,
    })
}

impl WeightedPotential {
    /// Maps any field `Q'` back to `q_1 - q_2` with these weights.
    pub fn unweight(&self, q: &Field) -> Result<Field> {
        self.q.same_grid(q)?;
        Field::new(
            q.grid().clone(),
            (0..q.len())
                .map(|k| {
                    if self.support.contains(k) {
                        q.at(k) / (self.f_weight * self.r_factor.at(k) * self.j_weight.at(k))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect(),
        )
    }
}
