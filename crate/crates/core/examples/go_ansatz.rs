// Builds a high-order geometrical-optics ansatz in a medium with a Gaussian potential, prints its
// manifest and the residual it leaves at a few frequencies.

use fracgo::ansatz::{build_high_s, RayGeometry};
use fracgo::media::{Medium, ScalarProfile};
use fracgo::residual::residual;
use fracgo::transport::BoundaryAmplitude;
use fracgo::Grid;

pub fn run() -> fracgo::Result<()> {
    let s = 0.75;
    let medium = Medium::constant(1.0, 0.0, s)?.with_q(ScalarProfile::Gaussian {
        base: 0.0,
        amplitude: 1.0,
        center: [0.0, 0.0],
        width: 0.5,
    });
    let grid = Grid::new(vec![512, 64], vec![6.0, 6.0], vec![-3.0, -3.0])?;
    let ansatz = build_high_s(
        &medium,
        &grid,
        &RayGeometry::plane([1.0, 0.0]),
        &BoundaryAmplitude::transverse(0.4),
        2,
        0.5,
    )?;
    println!("{}", ansatz.manifest_json()?);
    for tau in [16.0, 32.0, 64.0] {
        let u = ansatz.evaluate(tau)?;
        println!(
            "tau = {tau:>4}: ||L u||_L2(Omega) = {:.4e}",
            residual(&medium, &u, tau, 0.0)?
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
