//! Acceptance suite: one verdict line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are always visible:
//! `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use fracgo::ansatz::{build_high_s, build_low_s, AnsatzRecipe, RayGeometry};
use fracgo::media::{
    build_polar_chart, eikonal_distance, trace_ray, ChartBase, ChartOptions, Medium, Omega, PolarChart, RayOptions,
};
use fracgo::presets::{high_s_recipe, low_s_recipe, plane_gaussian_expansion, EXPANSION_TAUS, SWEEP_TAUS};
use fracgo::residual::{fit_log2_slope, phase_correction_ablation, tau_sweep};
use fracgo::spectral::{frac_lap_point_oracle, frac_laplacian, QuadratureConfig};
use fracgo::transport::{
    closed_form_nodes, phase_correction_phi1, polar_amplitude_closed_form, transport_coefficients, transport_nodes,
    BoundaryAmplitude, Phase, TransportSource,
};
use fracgo::xray::{
    invert_cg, optimal_tau, predicted_gamma, ray_transform_fn, stability_experiment, weighted_potential, Phantom,
    RayCoordinate, RayOperator, StabilityConfig, XRayGeometry,
};
use fracgo::{Error, Field, Grid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn max_rel(a: &[Complex64], b: &[Complex64], n_t: usize, skip: usize) -> f64 {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        if j % n_t >= skip {
            num = num.max((x - y).norm());
            den = den.max(y.norm());
        }
    }
    num / den
}

fn random_field(grid: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..grid.len())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    Field::new(grid.clone(), v).unwrap()
}

fn spectral_identities() -> Verdict {
    let g = Grid::new(vec![32, 32], vec![2.0 * PI; 2], vec![0.0; 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut eig: f64 = 0.0;
    for &s in &[0.3, 0.5, 0.75, 1.0] {
        let mut drawn = 0;
        while drawn < 100 {
            let k = [rng.random_range(-15..=15) as f64, rng.random_range(-15..=15) as f64];
            if k == [0.0, 0.0] {
                continue;
            }
            drawn += 1;
            let u = Field::from_fn(&g, |x| Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1])).unwrap();
            let lambda = (k[0] * k[0] + k[1] * k[1]).powf(s);
            let v = frac_laplacian(&u, s).unwrap();
            eig = eig.max(v.sub(&u.scale_real(lambda).unwrap()).unwrap().max_abs() / lambda);
        }
    }
    let u = random_field(&g, 1);
    let w = random_field(&g, 2);
    let mut semi: f64 = 0.0;
    for (a, b) in [(0.3, 0.5), (0.25, 0.75), (0.5, 0.5)] {
        let lhs = frac_laplacian(&frac_laplacian(&u, a).unwrap(), b).unwrap();
        let rhs = frac_laplacian(&u, a + b).unwrap();
        semi = semi.max(lhs.sub(&rhs).unwrap().max_abs() / rhs.max_abs());
    }
    let mut adj: f64 = 0.0;
    for s in [0.3, 0.5, 0.75, 1.0] {
        let lu = frac_laplacian(&u, s).unwrap();
        let lw = frac_laplacian(&w, s).unwrap();
        let d = (lu.inner(&w).unwrap() - u.inner(&lw).unwrap()).norm();
        adj = adj.max(d / (lu.norm_l2(None) * w.norm_l2(None)));
    }
    verdict(
        eig <= 1e-12 && semi <= 1e-12 && adj <= 1e-12,
        format!("eigen rel {eig:.1e}, semigroup rel {semi:.1e}, self-adjoint rel {adj:.1e} (tol 1e-12)"),
    )
}

fn bump(x: [f64; 2]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 < 1.0 {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Worst spectral-vs-oracle error relative to `max |(-Delta)^s u|` at ten nodes of the unit disk,
/// on a box of side `period` with spacing 1/64.
fn oracle_error(period: f64, s: f64) -> f64 {
    let n = (64.0 * period) as usize;
    let g = Grid::square(n, period).unwrap();
    let u = Field::from_real_fn(&g, bump).unwrap();
    let c = (n / 2) as f64;
    let quad = QuadratureConfig {
        epsilon: 0.15,
        ..QuadratureConfig::default()
    };
    let spectral = frac_laplacian(&u, s).unwrap();
    let scale = spectral.max_abs();
    (0..10)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / 10.0;
            let rad = 0.08 * i as f64;
            let k = g.flat_index([
                (c + 64.0 * rad * a.cos()).round() as usize,
                (c + 64.0 * rad * a.sin()).round() as usize,
            ]);
            (frac_lap_point_oracle(&u, g.point(k), s, &quad).unwrap() - spectral.at(k)).norm() / scale
        })
        .fold(0.0, f64::max)
}

fn oracle_agreement() -> Verdict {
    // the bump fills the central quarter of the L = 8 box; L = 16 is reported for the trend only
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [0.3, 0.5, 0.75] {
        let e4 = oracle_error(8.0, s);
        let e8 = oracle_error(16.0, s);
        pass &= e4 <= 1e-3;
        parts.push(format!("s={s}: {e4:.1e} (8x padding {e8:.1e})"));
    }
    verdict(pass, format!("rel err at 4x padding {} (tol 1e-3)", parts.join(", ")))
}

fn const_coef_slopes() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [0.5, 0.6, 0.75] {
        match tau_sweep(&AnsatzRecipe::ConstCoef { s, m: 3 }, &SWEEP_TAUS, true) {
            Ok(r) => {
                let ok = r.slope() <= -2.7 && r.citable();
                pass &= ok;
                let shift = r.refinement.as_ref().map_or(f64::NAN, |f| f.shift);
                parts.push(format!("s={s}: slope {:.3} shift {shift:.1e}", r.slope()));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("s={s}: {e}"));
            }
        }
    }
    verdict(pass, format!("{} (gate slope <= -2.7, shift < 0.1)", parts.join("; ")))
}

fn expansion_orders() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [0.3, 0.5, 0.75] {
        let r = plane_gaussian_expansion(s, &EXPANSION_TAUS).unwrap();
        let d0 = r.fit_d0.slope;
        let d1 = r.fit_d1.slope;
        pass &= (d0 - (2.0 * s - 1.0)).abs() <= 0.2 && (d1 - (2.0 * s - 2.0)).abs() <= 0.2;
        parts.push(format!(
            "s={s}: D0 {d0:.3} (exp {:.2}), D1 {d1:.3} (exp {:.2})",
            2.0 * s - 1.0,
            2.0 * s - 2.0
        ));
    }
    verdict(pass, format!("{} (tol 0.2)", parts.join("; ")))
}

fn point_chart(m: &Medium) -> PolarChart {
    build_polar_chart(
        m,
        ChartBase::Point {
            p: [-2.0, 0.0],
            center_angle: 0.0,
            half_width: 0.9,
        },
        ChartOptions {
            n_rays: 129,
            dt: 0.01,
            budget: 20.0,
        },
    )
    .unwrap()
}

fn transport_closed_forms() -> Verdict {
    let radial = Medium::radial(0.1, 0.5, 0.6)
        .unwrap()
        .with_outer(Omega::disk(2.5))
        .unwrap();
    let chart = point_chart(&radial);
    let b = BoundaryAmplitude::angular(0.0, 0.2);
    let cf = closed_form_nodes(&radial, &chart, &b, false).unwrap();
    let ode = transport_nodes(&radial, &chart, &b, TransportSource::Homogeneous).unwrap();
    let e_radial = max_rel(&ode, &cf, chart.n_t(), 10);

    let s = 0.7;
    let slab = Medium::exponential_slab(s).unwrap();
    let chart = build_polar_chart(
        &slab,
        ChartBase::Plane {
            origin: [-1.25, 0.0],
            direction: [1.0, 0.0],
            half_width: 1.2,
        },
        ChartOptions {
            n_rays: 65,
            dt: 0.005,
            budget: 10.0,
        },
    )
    .unwrap();
    let b = BoundaryAmplitude::Constant { scale: 1.0 };
    let cf = closed_form_nodes(&slab, &chart, &b, false).unwrap();
    let ode = transport_nodes(&slab, &chart, &b, TransportSource::Homogeneous).unwrap();
    let e_slab = max_rel(&ode, &cf, chart.n_t(), 0);

    let mut e_bs: f64 = 0.0;
    for s in [0.3, 0.5, 0.8] {
        let m = Medium::exponential_slab(s).unwrap();
        let g = Grid::square(32, 8.0).unwrap();
        let c = transport_coefficients(&Phase::ExponentialSlab, &m, &g).unwrap();
        for k in 0..g.len() {
            let x = g.point(k);
            let exact = (2.0 * s - 1.0) * x[0].exp();
            e_bs = e_bs.max((c.b_s.at(k).re - exact).abs() / x[0].exp());
        }
    }
    verdict(
        e_radial <= 1e-4 && e_slab <= 1e-4 && e_bs <= 1e-8,
        format!("radial rel {e_radial:.1e}, slab rel {e_slab:.1e} (tol 1e-4); slab b_s err {e_bs:.1e} (tol 1e-8)"),
    )
}

fn phase_ablation() -> Verdict {
    match phase_correction_ablation(&low_s_recipe(0.3, 1.0, true), &SWEEP_TAUS, true) {
        Ok(r) => {
            let (off, on) = r.slopes();
            let citable = r.without_phi1.citable() && r.with_phi1.citable();
            verdict(
                off.abs() <= 0.1 && on <= -0.4 && citable,
                format!("without phi1 {off:.3} (in [-0.1, 0.1]), with phi1 {on:.3} (<= -0.4), refinement {citable}"),
            )
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn geometry() -> Verdict {
    let mut orders = Vec::new();
    for c in [1.0, 2.0] {
        let m = Medium::constant(c, 0.0, 0.5).unwrap();
        let x0 = [-2.0, 0.0];
        let sizes = [64.0, 128.0, 256.0, 512.0];
        let errs: Vec<f64> = sizes
            .iter()
            .map(|&n| {
                let g = Grid::square(n as usize, 8.0).unwrap();
                let phi = eikonal_distance(&m, &g, x0).unwrap();
                m.omega()
                    .mask(&g)
                    .indices()
                    .map(|k| {
                        let x = g.point(k);
                        (phi.at(k).re - c * ((x[0] - x0[0]).powi(2) + x[1] * x[1]).sqrt()).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        orders.push(-fit_log2_slope(&sizes, &errs).unwrap().slope);
    }

    let opts = RayOptions {
        step: 1e-3,
        budget: 100.0,
    };
    let slab = Medium::exponential_slab(0.5).unwrap();
    let x0 = [-1.25, 0.0];
    let d_slab = trace_ray(&slab, x0, [slab.r(x0), 0.0], opts)
        .unwrap()
        .hamiltonian_drift(&slab);
    let radial = Medium::radial(0.3, 0.5, 0.6).unwrap();
    let x1 = [-1.25, 0.3];
    let r1 = radial.r(x1);
    let xi = [r1 * 0.2f64.cos(), r1 * 0.2f64.sin()];
    let d_radial = trace_ray(&radial, x1, xi, opts).unwrap().hamiltonian_drift(&radial);
    let drift = d_slab.max(d_radial);

    let m = Medium::radial(0.1, 0.5, 0.6)
        .unwrap()
        .with_outer(Omega::disk(2.5))
        .unwrap();
    let chart = point_chart(&m);
    let g = Grid::square(64, 6.0).unwrap();
    let sampling = chart.locate(&g, m.omega()).unwrap();
    let trip = chart.round_trip_error(&sampling);
    let h = g.max_spacing();

    verdict(
        orders.iter().all(|&o| o >= 0.9) && drift <= 1e-8 && trip <= 2.0 * h,
        format!(
            "FMM order r=1 {:.2}, r=2 {:.2} (>= 0.9); Hamiltonian drift {drift:.1e} (<= 1e-8); chart round trip {trip:.1e} (<= {:.1e})",
            orders[0],
            orders[1],
            2.0 * h
        ),
    )
}

fn distance(rc: &RayCoordinate) -> f64 {
    (rc.p[0] * rc.theta.sin() - rc.p[1] * rc.theta.cos()).abs()
}

fn xray_stack() -> Verdict {
    let m = Medium::constant(1.0, 0.0, 0.75).unwrap();
    let g = Grid::square(64, 2.8).unwrap();
    let geo = XRayGeometry::around(&m, 16, 24).unwrap();

    let op = RayOperator::new(&m, &g, &geo, None).unwrap();
    let u = random_field(&g, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let v: Vec<Complex64> = (0..op.n_rays())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let lhs: Complex64 = op.apply(&u).unwrap().iter().zip(&v).map(|(a, b)| a * b.conj()).sum();
    let rhs: Complex64 = u
        .values()
        .iter()
        .zip(op.adjoint(&v).unwrap().values())
        .map(|(a, b)| a * b.conj())
        .sum();
    let adj = (lhs - rhs).norm() / lhs.norm();

    let sigma: f64 = 0.3;
    let gauss = ray_transform_fn(
        &m,
        |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / (sigma * sigma)).exp(), 0.0),
        &geo,
        2e-3,
    )
    .unwrap();
    let mut e_gauss: f64 = 0.0;
    for (rc, val) in geo.rays.iter().zip(&gauss.values) {
        let d = distance(rc);
        let exact = sigma * PI.sqrt() * (-d * d / (sigma * sigma)).exp();
        if exact > 1e-3 {
            e_gauss = e_gauss.max((val.re - exact).abs() / exact);
        }
    }
    let disk = ray_transform_fn(
        &m,
        |x| Complex64::new(if x[0] * x[0] + x[1] * x[1] < 1.0 { 1.0 } else { 0.0 }, 0.0),
        &geo,
        1e-4,
    )
    .unwrap();
    let mut e_disk: f64 = 0.0;
    for (rc, val) in geo.rays.iter().zip(&disk.values) {
        let d = distance(rc);
        if d < 0.9 {
            let exact = 2.0 * (1.0 - d * d).sqrt();
            e_disk = e_disk.max((val.re - exact).abs() / exact);
        }
    }

    let phantom = Phantom::default();
    let dense = XRayGeometry::around(&m, 64, 128).unwrap();
    let data = ray_transform_fn(&m, |x| Complex64::new(phantom.eval(x), 0.0), &dense, 5e-3).unwrap();
    let q = invert_cg(&data, &m, &g, 200, 1e-6).unwrap();
    let mask = m.omega().mask(&g);
    let truth = Field::from_real_fn(&g, |x| phantom.eval(x)).unwrap().restricted(&mask);
    let rec = q.sub(&truth).unwrap().norm_l2(Some(&mask)) / truth.norm_l2(Some(&mask));

    verdict(
        adj <= 1e-6 && e_gauss <= 1e-3 && e_disk <= 1e-3 && rec <= 0.05,
        format!(
            "adjoint rel {adj:.1e} (1e-6); Gaussian chords {e_gauss:.1e}, disk chords {e_disk:.1e} (1e-3); CG recovery on 64^2 {rec:.4} (0.05)"
        ),
    )
}

fn stability() -> Verdict {
    let formulas = (optimal_tau(1e-6, 0.5).unwrap() - 1000.0).abs() < 1e-9
        && (optimal_tau(1e-4, 0.75).unwrap() - 100.0).abs() < 1e-9
        && (predicted_gamma(0.75, 4.0).unwrap() - 0.1).abs() < 1e-15
        && predicted_gamma(0.5, f64::INFINITY).unwrap() == 0.25;
    match stability_experiment(&StabilityConfig::default()) {
        Ok(r) => verdict(
            formulas && r.within_window,
            format!(
                "formulas {formulas}; fitted exponent {:.4} vs gamma_pred {:.4}, ratio {:.3} (window [0.5, 1.5])",
                r.fitted_exponent, r.predicted_gamma, r.ratio
            ),
        ),
        Err(e) => verdict(false, format!("formulas {formulas}; experiment failed: {e}")),
    }
}

fn regime_gates() -> Verdict {
    let regime = |r: Result<(), Error>| matches!(r, Err(Error::Regime { .. }));
    let g = Grid::new(vec![64, 64], vec![6.0, 6.0], vec![-3.0, -3.0]).unwrap();
    let geo = RayGeometry::plane([1.0, 0.0]);
    let b = BoundaryAmplitude::transverse(0.4);
    let low = Medium::constant(1.0, 1.0, 0.3).unwrap();
    let half = Medium::constant(1.0, 1.0, 0.5).unwrap();
    let high = Medium::constant(1.0, 1.0, 0.7).unwrap();
    let mut checks: Vec<(&str, bool)> = vec![
        (
            "single-phase builder at s<1/2",
            regime(build_high_s(&low, &g, &geo, &b, 1, 0.5).map(|_| ())),
        ),
        (
            "phase correction at s>=1/2",
            regime(build_low_s(&half, &g, &geo, &b, true, 0.5).map(|_| ())),
        ),
        (
            "ablation on a high-s recipe",
            regime(phase_correction_ablation(&high_s_recipe(0.7, 2, 1.0), &SWEEP_TAUS, false).map(|_| ())),
        ),
        ("optimal_tau at s<1/2", regime(optimal_tau(1e-3, 0.3).map(|_| ()))),
        (
            "predicted_gamma at s<1/2",
            regime(predicted_gamma(0.49, 4.0).map(|_| ())),
        ),
        (
            "weighted potential at s<1/2",
            regime(weighted_potential(&low, &Field::zeros(&g), &Field::zeros(&g), None).map(|_| ())),
        ),
        (
            "stability experiment at s<1/2",
            regime(
                stability_experiment(&StabilityConfig {
                    s: 0.3,
                    ..StabilityConfig::default()
                })
                .map(|_| ()),
            ),
        ),
    ];
    let chart = point_chart(&high.clone().with_outer(Omega::disk(2.5)).unwrap());
    let bc = BoundaryAmplitude::Constant { scale: 1.0 };
    checks.push((
        "first amplitude correction at s=1/2",
        regime(transport_nodes(&half, &chart, &bc, TransportSource::FirstCorrection).map(|_| ())),
    ));
    let sampling = chart
        .locate(&Grid::square(16, 8.0).unwrap(), &Omega::disk(0.2))
        .unwrap();
    checks.push((
        "phi1 at s>=1/2",
        regime(phase_correction_phi1(&high, &chart, &sampling).map(|_| ())),
    ));
    checks.push((
        "polar closed form at s<1/2",
        regime(polar_amplitude_closed_form(&chart, &sampling, &low, &bc).map(|_| ())),
    ));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    verdict(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} refusals raised Regime errors", checks.len())
        } else {
            format!("not refused: {}", failed.join(", "))
        },
    )
}

type Criterion = (u32, &'static str, f64, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "spectral correctness", 10.0, spectral_identities),
        (2, "oracle agreement", 60.0, oracle_agreement),
        (3, "constant-coefficient residual order", 300.0, const_coef_slopes),
        (4, "expansion orders", 180.0, expansion_orders),
        (5, "transport closed forms", 60.0, transport_closed_forms),
        (6, "low-s phase correction ablation", 180.0, phase_ablation),
        (7, "eikonal and ray geometry", 120.0, geometry),
        (8, "x-ray stack", 180.0, xray_stack),
        (9, "stability exponent", 600.0, stability),
        (10, "regime gates", 5.0, regime_gates),
    ];
    let filter: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        if filter.is_some_and(|k| k != n) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        let pass = v.pass && secs <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {name}: {} [{secs:.1} s of {budget:.0} s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
