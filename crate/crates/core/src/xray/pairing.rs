use num_complex::Complex64;

use crate::error::Result;
use crate::media::Medium;
use crate::spectral::Field;

/// `int_Omega (q_1 - q_2) u_1 conj(u_2) dx` by grid quadrature.
pub fn alessandrini_pairing(medium: &Medium, q1: &Field, q2: &Field, u1: &Field, u2: &Field) -> Result<Complex64> {
    q1.same_grid(q2)?;
    q1.same_grid(u1)?;
    q1.same_grid(u2)?;
    let grid = q1.grid();
    let mask = medium.omega().mask(grid);
    let sum: Complex64 = mask
        .indices()
        .map(|k| (q1.at(k) - q2.at(k)) * u1.at(k) * u2.at(k).conj())
        .sum();
    Ok(sum * grid.cell_volume())
}
