//! C-infinity transition functions shared by cutoffs and quadrature splits.

fn psi(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else {
        (-1.0 / z).exp()
    }
}

/// Smooth monotone step: 0 for `t <= 0`, 1 for `t >= 1`, flat to all orders at both ends.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = psi(t);
        a / (a + psi(1.0 - t))
    }
}

/// 1 for `x <= inner`, 0 for `x >= outer`, smooth in between.
pub fn smooth_plateau(x: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((x - inner) / (outer - inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_symmetric_and_bounded() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let a = smooth_step(t);
            assert!((0.0..=1.0).contains(&a));
            assert!((a + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
        assert_eq!(smooth_plateau(0.3, 0.5, 1.0), 1.0);
        assert_eq!(smooth_plateau(1.3, 0.5, 1.0), 0.0);
    }
}
