// Recovers a smooth phantom on a 64^2 grid from its ray transform by conjugate gradients, with
// and without measurement noise.

use fracgo::media::Medium;
use fracgo::xray::{invert_cg, ray_transform_fn, Phantom, XRayGeometry};
use fracgo::{Field, Grid};
use num_complex::Complex64;

pub fn run() -> fracgo::Result<()> {
    let m = Medium::constant(1.0, 0.0, 0.75)?;
    let grid = Grid::square(64, 2.8)?;
    let geo = XRayGeometry::around(&m, 64, 128)?;
    let phantom = Phantom::default();
    let data = ray_transform_fn(&m, |x| Complex64::new(phantom.eval(x), 0.0), &geo, 5e-3)?;
    let mask = m.omega().mask(&grid);
    let truth = Field::from_real_fn(&grid, |x| phantom.eval(x))?.restricted(&mask);
    for (noise, lambda) in [(0.0, 1e-6), (0.01, 1e-2), (0.05, 5e-2)] {
        let observed = data.with_noise(noise, 7);
        let q = invert_cg(&observed, &m, &grid, 200, lambda)?;
        let err = q.sub(&truth)?.norm_l2(Some(&mask)) / truth.norm_l2(Some(&mask));
        println!("noise {noise:<5} lambda {lambda:<6} relative L2 error {err:.4}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
