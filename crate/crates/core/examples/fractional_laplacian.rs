// Spectral fractional Laplacian: a Fourier mode is an eigenfunction, and the torus operator
// agrees with the singular-integral definition for a well-padded Gaussian.

use std::f64::consts::PI;

use fracgo::spectral::{frac_lap_point_oracle, frac_laplacian, QuadratureConfig};
use fracgo::{Field, Grid};
use num_complex::Complex64;

pub fn run() -> fracgo::Result<()> {
    let g = Grid::new(vec![32, 32], vec![2.0 * PI; 2], vec![0.0; 2])?;
    let u = Field::from_fn(&g, |x| Complex64::from_polar(1.0, 3.0 * x[0] + 4.0 * x[1]))?;
    for s in [0.3, 0.5, 0.75, 1.0] {
        let v = frac_laplacian(&u, s)?;
        let lambda = 5f64.powf(2.0 * s);
        let err = v.sub(&u.scale_real(lambda)?)?.max_abs();
        println!("s = {s:<4}  eigenvalue {lambda:>8.4}  max deviation {err:.1e}");
    }

    let line = Grid::line(1024, 32.0)?;
    let gauss = Field::from_real_fn(&line, |x| (-x[0] * x[0] / 0.25).exp())?;
    let spectral = frac_laplacian(&gauss, 0.5)?;
    for k in [512, 517, 530] {
        let o = frac_lap_point_oracle(&gauss, line.point(k), 0.5, &QuadratureConfig::default())?;
        println!(
            "x = {:+.4}  spectral {:+.6}  oracle {:+.6}",
            line.point(k)[0],
            spectral.at(k).re,
            o.re
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
