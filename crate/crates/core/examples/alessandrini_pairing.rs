// The pairing `int (q_1 - q_2) u_1 conj(u_2)` of two geometrical-optics solutions against the
// weighted ray transform it converges to as the frequency grows.

use fracgo::ansatz::{build_high_s, RayGeometry};
use fracgo::media::{Medium, SampledProfile, ScalarProfile};
use fracgo::transport::BoundaryAmplitude;
use fracgo::xray::{alessandrini_pairing, ray_transform_fn, weighted_potential, Phantom, RayCoordinate, XRayGeometry};
use fracgo::{Field, Grid};
use num_complex::Complex64;

pub fn run() -> fracgo::Result<()> {
    let s = 0.75;
    let grid = Grid::new(vec![512, 64], vec![4.0, 4.0], vec![-2.0, -2.0])?;
    let phantom = Phantom::default();
    let dq = Field::from_real_fn(&grid, |x| phantom.eval(x))?;
    let m2 = Medium::constant(1.0, 0.0, s)?;
    let m1 = m2
        .clone()
        .with_q(ScalarProfile::Sampled(SampledProfile::new(dq.clone())?));
    let b = BoundaryAmplitude::transverse(0.25);
    let geo = RayGeometry::plane([1.0, 0.0]);
    let u1 = build_high_s(&m1, &grid, &geo, &b, 2, 0.3)?;
    let u2 = build_high_s(&m2, &grid, &geo, &b, 2, 0.3)?;
    let q2 = Field::zeros(&grid);
    let w = weighted_potential(&m1, &dq, &q2, None)?;

    let n_lines = 201;
    let dd = 2.0 / (n_lines - 1) as f64;
    let lines: Vec<f64> = (0..n_lines).map(|i| -1.0 + i as f64 * dd).collect();
    let mut parallel = XRayGeometry::around(&m1, 1, 1)?;
    parallel.rays = lines
        .iter()
        .map(|&d| RayCoordinate {
            p: [-(1.5625 - d * d).sqrt(), d],
            theta: 0.0,
        })
        .collect();
    let iq = ray_transform_fn(
        &m1,
        |x| Complex64::new(phantom.eval(x) * w.f_weight, 0.0),
        &parallel,
        2e-3,
    )?;
    let transform: Complex64 = lines
        .iter()
        .zip(&iq.values)
        .enumerate()
        .map(|(i, (&d, v))| {
            let end = if i == 0 || i == n_lines - 1 { 0.5 } else { 1.0 };
            end * dd * b.eval(d).powi(2) * v
        })
        .sum();
    println!("int b^2 I(Q) = {:.6}", transform.re);
    for tau in [16.0, 32.0, 64.0] {
        let p = alessandrini_pairing(&m1, &dq, &q2, &u1.evaluate(tau)?, &u2.evaluate(tau)?)?;
        println!(
            "tau = {tau:>4}: pairing {:.6}{:+.6}i, |difference| {:.2e}",
            p.re,
            p.im,
            (p - transform).norm()
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
