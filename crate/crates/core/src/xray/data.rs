use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::geometry::{RayCoordinate, XRayGeometry};
use crate::error::{Error, Result};

/// Ray-transform samples with the injected noise level they carry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XRayData {
    pub geometry: XRayGeometry,
    pub values: Vec<Complex64>,
    pub noise_level: f64,
    pub seed: Option<u64>,
}

impl XRayData {
    pub fn clean(geometry: &XRayGeometry, values: Vec<Complex64>) -> Self {
        Self {
            geometry: geometry.clone(),
            values,
            noise_level: 0.0,
            seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.geometry.len() {
            return Err(Error::invalid("data length differs from the ray count"));
        }
        if self.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite { operation: "XRayData" });
        }
        Ok(())
    }

    pub fn rms(&self) -> f64 {
        let n = self.values.len().max(1) as f64;
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / n).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// Adds i.i.d. complex Gaussian noise with standard deviation `level * rms` per ray.
    pub fn with_noise(&self, level: f64, seed: u64) -> Self {
        self.with_noise_scale(level, self.rms(), seed)
    }

    /// As [`Self::with_noise`] with an explicit reference amplitude.
    pub fn with_noise_scale(&self, level: f64, reference: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = level * reference / std::f64::consts::SQRT_2;
        let values = self
            .values
            .iter()
            .map(|v| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                v + Complex64::new(sd * re, sd * im)
            })
            .collect();
        Self {
            geometry: self.geometry.clone(),
            values,
            noise_level: level,
            seed: Some(seed),
        }
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "p_x,p_y,theta,value_re,value_im")?;
        for (r, v) in self.geometry.rays.iter().zip(&self.values) {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.p[0], r.p[1], r.theta, v.re, v.im
            )?;
        }
        Ok(())
    }

    /// Reads the CSV layout back onto a known geometry, checking that the rays agree.
    pub fn read_csv(geometry: &XRayGeometry, r: impl BufRead) -> Result<Self> {
        let mut values = Vec::with_capacity(geometry.len());
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if i == 0 {
                if line.trim() != "p_x,p_y,theta,value_re,value_im" {
                    return Err(Error::Format(format!("unexpected header {line:?}")));
                }
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Format(format!("line {}: {e}", i + 1)))
                })
                .collect::<Result<_>>()?;
            if cols.len() != 5 {
                return Err(Error::Format(format!("line {} has {} columns", i + 1, cols.len())));
            }
            let k = values.len();
            let RayCoordinate { p, theta } = *geometry
                .rays
                .get(k)
                .ok_or_else(|| Error::Format("more rows than rays".into()))?;
            if (p[0] - cols[0]).abs() + (p[1] - cols[1]).abs() + (theta - cols[2]).abs() > 1e-9 {
                return Err(Error::Format(format!("row {k} does not match the ray geometry")));
            }
            values.push(Complex64::new(cols[3], cols[4]));
        }
        let data = Self::clean(geometry, values);
        data.validate()?;
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Medium;

    #[test]
    fn csv_round_trip_and_noise_level() {
        let m = Medium::constant(1.0, 0.0, 0.75).unwrap();
        let g = XRayGeometry::around(&m, 8, 16).unwrap();
        let d = XRayData::clean(&g, (0..g.len()).map(|k| Complex64::new(k as f64, -0.5)).collect());
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = XRayData::read_csv(&g, buf.as_slice()).unwrap();
        assert_eq!(back.values, d.values);

        let n = d.with_noise(0.1, 3);
        let diff: f64 = n
            .values
            .iter()
            .zip(&d.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>();
        let rel = (diff / g.len() as f64).sqrt() / d.rms();
        assert!((rel - 0.1).abs() < 0.02, "{rel}");
        assert_eq!(n.values, d.with_noise(0.1, 3).values);
    }
}
