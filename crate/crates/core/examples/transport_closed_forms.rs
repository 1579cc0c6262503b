// Leading transport amplitude in the exponential slab `r = e^{x_1}`: closed form, ray ODE and
// the attenuation coefficient `b_s = (2s - 1) e^{x_1}`.

use fracgo::media::{build_polar_chart, ChartBase, ChartOptions, Medium};
use fracgo::transport::{
    closed_form_nodes, transport_coefficients, transport_nodes, BoundaryAmplitude, Phase, TransportSource,
};
use fracgo::Grid;

pub fn run() -> fracgo::Result<()> {
    for s in [0.3, 0.7] {
        let m = Medium::exponential_slab(s)?;
        let chart = build_polar_chart(
            &m,
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
        )?;
        let b = BoundaryAmplitude::Constant { scale: 1.0 };
        let cf = closed_form_nodes(&m, &chart, &b, false)?;
        let ode = transport_nodes(&m, &chart, &b, TransportSource::Homogeneous)?;
        let scale = cf.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let gap = cf.iter().zip(&ode).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        let mid = 32 * chart.n_t() + chart.n_t() - 1;
        println!(
            "s = {s}: amplitude at the exit of the central ray {:.6} (x1 = {:+.3}); ODE vs closed form {gap:.1e}",
            cf[mid].re,
            chart.nodes()[mid].x[0]
        );

        let g = Grid::square(32, 8.0)?;
        let c = transport_coefficients(&Phase::ExponentialSlab, &m, &g)?;
        let err = (0..g.len())
            .map(|k| {
                let x = g.point(k);
                (c.b_s.at(k).re - (2.0 * s - 1.0) * x[0].exp()).abs() / x[0].exp()
            })
            .fold(0.0, f64::max);
        println!("       b_s against (2s - 1) e^x1 on a 32^2 grid: {err:.1e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
