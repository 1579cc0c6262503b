use num_complex::Complex64;

use super::ConstCoefSymbolTable;
use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, cumulative_integral, derivative, Field};

/// Index of the grid axis `direction` points along (positive axes only).
pub fn axis_of(direction: [f64; 2]) -> Result<usize> {
    match direction {
        [x, y] if x == 1.0 && y == 0.0 => Ok(0),
        [x, y] if x == 0.0 && y == 1.0 => Ok(1),
        _ => Err(Error::invalid(format!(
            "direction {direction:?} must be a positive coordinate axis"
        ))),
    }
}

fn upstream_max(f: &Field, axis: usize) -> f64 {
    let g = f.grid();
    (0..g.len())
        .filter(|&k| g.multi_index(k)[axis] == 0)
        .map(|k| f.at(k).norm())
        .fold(0.0, f64::max)
}

/// Amplitudes `a_1 .. a_M` of the constant-coefficient expansion.
///
/// `alpha . grad a_{nu+1} = -(i / 2s) sum_{l <= nu} Psi_{nu+2,l} a_l`, integrated along the axis
/// of `alpha` from the first grid row. Every `a_l` (including `a_0`) is multiplied by `window`
/// before it feeds the next source, and the returned fields carry the window.
pub fn const_coef_amplitudes(table: &ConstCoefSymbolTable, a0: &Field, window: &Field, m: usize) -> Result<Vec<Field>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    a0.same_grid(window)?;
    let axis = axis_of(table.direction())?;
    if axis >= a0.grid().dim() {
        return Err(Error::invalid("direction axis exceeds the grid dimension"));
    }
    if m + 1 > table.nu_max() {
        return Err(Error::invalid(format!(
            "{m} amplitudes need symbols up to nu = {}, table stops at {}",
            m + 1,
            table.nu_max()
        )));
    }
    let scale = a0.max_abs().max(f64::MIN_POSITIVE);
    let drift = derivative(a0, axis)?.max_abs();
    let k_nyq = a0.grid().nyquist(axis);
    if drift > 1e-10 * scale * (1.0 + k_nyq) {
        return Err(Error::invalid(format!(
            "a0 varies along the propagation axis: max |alpha . grad a0| = {drift:e}"
        )));
    }
    let w_up = upstream_max(window, axis);
    if w_up > 1e-12 {
        return Err(Error::Support(format!(
            "window does not vanish on the upstream row (max {w_up:e})"
        )));
    }
    let factor = Complex64::new(0.0, -1.0 / (2.0 * table.s()));
    let mut amps = vec![a0.mul(window)?];
    for nu in 0..m {
        let mut src = Field::zeros(a0.grid());
        for (l, al) in amps.iter().enumerate() {
            let psi = table.psi(nu + 2, l)?;
            src = src.add(&apply_multiplier(al, &psi)?)?;
        }
        let src = src.scale(factor)?;
        let up = upstream_max(&src, axis);
        if up > 1e-4 * src.max_abs() {
            return Err(Error::Support(format!(
                "source of a_{} has not decayed at the upstream row ({up:e})",
                nu + 1
            )));
        }
        amps.push(cumulative_integral(&src, axis)?.mul(window)?);
    }
    amps.remove(0);
    Ok(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::smooth_plateau;
    use crate::spectral::Grid;

    fn setup(s: f64) -> (ConstCoefSymbolTable, Field, Field) {
        let g = Grid::new(vec![1024, 64], vec![16.0, 8.0], vec![-8.0, -4.0]).unwrap();
        let t = ConstCoefSymbolTable::with_default_order(s, [1.0, 0.0]).unwrap();
        let a0 = Field::from_real_fn(&g, |x| (-x[1] * x[1] / 0.25).exp()).unwrap();
        let w = Field::from_real_fn(&g, |x| smooth_plateau(x[0].abs(), 5.2, 7.5)).unwrap();
        (t, a0, w)
    }

    #[test]
    fn first_amplitude_solves_its_transport() {
        let s = 0.6;
        let (t, a0, w) = setup(s);
        let a = const_coef_amplitudes(&t, &a0, &w, 1).unwrap();
        let psi = t.psi(2, 0).unwrap();
        let src = apply_multiplier(&a0.mul(&w).unwrap(), &psi)
            .unwrap()
            .scale(Complex64::new(0.0, -1.0 / (2.0 * s)))
            .unwrap();
        let d = derivative(&a[0], 0).unwrap();
        let g = a0.grid();
        let inner = crate::spectral::Mask::from_fn(g, |x| x[0].abs() < 5.0);
        let err = d.sub(&src).unwrap().max_abs_on(&inner);
        let rel = err / src.max_abs_on(&inner);
        assert!(rel < 1e-8, "{rel}");
    }

    #[test]
    fn zero_order_is_empty() {
        let (t, a0, w) = setup(0.5);
        assert!(const_coef_amplitudes(&t, &a0, &w, 0).unwrap().is_empty());
    }

    #[test]
    fn window_must_vanish_upstream() {
        let (t, a0, _) = setup(0.5);
        let ones = Field::constant(a0.grid(), Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            const_coef_amplitudes(&t, &a0, &ones, 2),
            Err(Error::Support(_))
        ));
    }

    #[test]
    fn non_invariant_a0_is_rejected() {
        let (t, _, w) = setup(0.5);
        let bad = Field::from_real_fn(w.grid(), |x| (-x[0] * x[0] - x[1] * x[1]).exp()).unwrap();
        assert!(const_coef_amplitudes(&t, &bad, &w, 1).is_err());
    }
}
