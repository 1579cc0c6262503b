use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(log2 x, log2 y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two points).
    pub stderr: f64,
}

pub fn fit_log2_slope(x: &[f64], y: &[f64]) -> Result<SlopeFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("slope fit needs two or more paired samples"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("slope fit needs positive finite samples"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.log2()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log2()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs distinct abscissae"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if lx.len() > 2 {
        let sse: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(a, b)| (b - intercept - slope * a).powi(2))
            .sum();
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit {
        slope,
        intercept,
        stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let x = [16.0, 32.0, 64.0, 128.0];
        let y: Vec<f64> = x.iter().map(|t: &f64| 3.0 * t.powf(-2.5)).collect();
        let f = fit_log2_slope(&x, &y).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.log2()).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(fit_log2_slope(&[1.0], &[1.0]).is_err());
        assert!(fit_log2_slope(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(fit_log2_slope(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn slope_is_scale_invariant(p in -4.0f64..2.0, c in 0.01f64..100.0) {
            let x = [8.0, 16.0, 32.0, 64.0, 128.0];
            let y: Vec<f64> = x.iter().enumerate().map(|(i, t): (usize, &f64)| t.powf(p) * (1.0 + 0.01 * (i % 2) as f64)).collect();
            let yc: Vec<f64> = y.iter().map(|v| c * v).collect();
            let a = fit_log2_slope(&x, &y).unwrap();
            let b = fit_log2_slope(&x, &yc).unwrap();
            prop_assert!((a.slope - b.slope).abs() < 1e-9);
            prop_assert!((a.stderr - b.stderr).abs() < 1e-9);
        }
    }
}
