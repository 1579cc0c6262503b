use fracgo::ansatz::{build_high_s, RayGeometry};
use fracgo::media::{Medium, SampledProfile, ScalarProfile};
use fracgo::residual::fit_log2_slope;
use fracgo::transport::BoundaryAmplitude;
use fracgo::xray::{alessandrini_pairing, ray_transform_fn, weighted_potential, Phantom, RayCoordinate, XRayGeometry};
use fracgo::{Field, Grid};
use num_complex::Complex64;

/// Pairing of plane-wave solutions on the same branch against `int b^2 IQ` over parallel lines.
#[test]
fn pairing_approaches_the_weighted_transform() {
    let s = 0.75;
    let grid = Grid::new(vec![1024, 64], vec![4.0, 4.0], vec![-2.0, -2.0]).unwrap();
    let phantom = Phantom::default();
    let dq = Field::from_real_fn(&grid, |x| phantom.eval(x)).unwrap();
    let m2 = Medium::constant(1.0, 0.0, s).unwrap();
    let m1 = m2
        .clone()
        .with_q(ScalarProfile::Sampled(SampledProfile::new(dq.clone()).unwrap()));
    let b = BoundaryAmplitude::transverse(0.25);
    let geo = RayGeometry::plane([1.0, 0.0]);
    let u1 = build_high_s(&m1, &grid, &geo, &b, 2, 0.3).unwrap();
    let u2 = build_high_s(&m2, &grid, &geo, &b, 2, 0.3).unwrap();
    let q2 = Field::zeros(&grid);

    let w = weighted_potential(&m1, &dq, &q2, None).unwrap();
    let n_lines = 401;
    let dd = 2.0 / (n_lines - 1) as f64;
    let lines: Vec<f64> = (0..n_lines).map(|i| -1.0 + i as f64 * dd).collect();
    let mut lg = XRayGeometry::around(&m1, 1, 1).unwrap();
    lg.rays = lines
        .iter()
        .map(|&d| RayCoordinate {
            p: [-(1.5625 - d * d).sqrt(), d],
            theta: 0.0,
        })
        .collect();
    let iq = ray_transform_fn(&m1, |x| Complex64::new(phantom.eval(x) * w.f_weight, 0.0), &lg, 1e-3).unwrap();
    let transform: Complex64 = lines
        .iter()
        .zip(&iq.values)
        .enumerate()
        .map(|(i, (&d, v))| {
            let wt = if i == 0 || i == n_lines - 1 { 0.5 } else { 1.0 };
            wt * dd * b.eval(d).powi(2) * v
        })
        .sum();

    let taus = [16.0, 32.0, 64.0, 128.0];
    let mut errs = Vec::new();
    for &tau in &taus {
        let p = alessandrini_pairing(&m1, &dq, &q2, &u1.evaluate(tau).unwrap(), &u2.evaluate(tau).unwrap()).unwrap();
        let e = (p - transform).norm();
        if tau == 64.0 {
            assert!(e < 0.05 * p.norm(), "|E| = {e}, pairing {p}");
        }
        errs.push(e);
    }
    let slope = fit_log2_slope(&taus, &errs).unwrap().slope;
    eprintln!("transform {transform}, |E| {errs:?}, slope {slope:.3}");
    assert!(slope < 0.0, "{errs:?}");
}
