// Euclidean ray transform of a Gaussian and of the unit-disk indicator against their exact
// chord integrals, plus the adjoint identity of the discrete operator.

use std::f64::consts::PI;

use fracgo::media::Medium;
use fracgo::xray::{ray_transform_fn, RayOperator, XRayGeometry};
use fracgo::{Field, Grid};
use num_complex::Complex64;

pub fn run() -> fracgo::Result<()> {
    let m = Medium::constant(1.0, 0.0, 0.75)?;
    let geo = XRayGeometry::around(&m, 16, 24)?;
    let distance = |p: [f64; 2], theta: f64| (p[0] * theta.sin() - p[1] * theta.cos()).abs();

    let sigma: f64 = 0.3;
    let gauss = ray_transform_fn(
        &m,
        |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / (sigma * sigma)).exp(), 0.0),
        &geo,
        2e-3,
    )?;
    let disk = ray_transform_fn(
        &m,
        |x| Complex64::new(if x[0] * x[0] + x[1] * x[1] < 1.0 { 1.0 } else { 0.0 }, 0.0),
        &geo,
        1e-4,
    )?;
    println!(
        "{:>8}  {:>12}  {:>12}  {:>12}  {:>12}",
        "d", "Gaussian", "exact", "disk", "exact"
    );
    for (i, rc) in geo.rays.iter().enumerate().step_by(37).take(8) {
        let d = distance(rc.p, rc.theta);
        let g_exact = sigma * PI.sqrt() * (-d * d / (sigma * sigma)).exp();
        let d_exact = if d < 1.0 { 2.0 * (1.0 - d * d).sqrt() } else { 0.0 };
        println!(
            "{d:>8.4}  {:>12.6}  {g_exact:>12.6}  {:>12.6}  {d_exact:>12.6}",
            gauss.values[i].re, disk.values[i].re
        );
    }

    let g = Grid::square(64, 2.8)?;
    let op = RayOperator::new(&m, &g, &geo, None)?;
    let u = Field::from_real_fn(&g, |x| (x[0] * 3.0).sin() * (-(x[0] * x[0] + x[1] * x[1])).exp())?;
    let v: Vec<Complex64> = (0..op.n_rays())
        .map(|j| Complex64::new((j as f64).cos(), 0.0))
        .collect();
    let lhs: Complex64 = op.apply(&u)?.iter().zip(&v).map(|(a, b)| a * b.conj()).sum();
    let rhs: Complex64 = u
        .values()
        .iter()
        .zip(op.adjoint(&v)?.values())
        .map(|(a, b)| a * b.conj())
        .sum();
    println!(
        "operator: {} rays, {} nonzeros; <Iu, v> - <u, I*v> = {:.1e}",
        op.n_rays(),
        op.nnz(),
        (lhs - rhs).norm()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
