// Geometry of a medium: fast-marching travel times, Hamiltonian rays and a polar normal chart.

use fracgo::media::{
    build_polar_chart, eikonal_distance, trace_ray, ChartBase, ChartOptions, Medium, Omega, RayOptions,
};
use fracgo::Grid;

pub fn run() -> fracgo::Result<()> {
    let m = Medium::constant(2.0, 0.0, 0.5)?;
    let x0 = [-2.0, 0.0];
    for n in [64, 128, 256] {
        let g = Grid::square(n, 8.0)?;
        let phi = eikonal_distance(&m, &g, x0)?;
        let err = m
            .omega()
            .mask(&g)
            .indices()
            .map(|k| {
                let x = g.point(k);
                (phi.at(k).re - 2.0 * ((x[0] - x0[0]).powi(2) + x[1] * x[1]).sqrt()).abs()
            })
            .fold(0.0, f64::max);
        println!("fast marching, N = {n:>3}: max travel-time error on Omega {err:.2e}");
    }

    let radial = Medium::radial(0.3, 0.5, 0.6)?;
    let start = [-1.25, 0.3];
    let r0 = radial.r(start);
    let ray = trace_ray(
        &radial,
        start,
        [r0, 0.0],
        RayOptions {
            step: 1e-3,
            budget: 100.0,
        },
    )?;
    let end = ray.points.last().map(|p| p.x).unwrap_or(start);
    println!(
        "ray through the radial bump exits at ({:+.4}, {:+.4}) after t = {:.4}; Hamiltonian drift {:.1e}",
        end[0],
        end[1],
        ray.exit_t,
        ray.hamiltonian_drift(&radial)
    );

    let wide = Medium::radial(0.1, 0.5, 0.6)?.with_outer(Omega::disk(2.5))?;
    let chart = build_polar_chart(
        &wide,
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
    )?;
    let g = Grid::square(64, 6.0)?;
    let sampling = chart.locate(&g, wide.omega())?;
    println!(
        "polar chart: {} rays x {} steps, round-trip error {:.1e} (grid spacing {:.3})",
        chart.n_rays(),
        chart.n_t(),
        chart.round_trip_error(&sampling),
        g.max_spacing()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
