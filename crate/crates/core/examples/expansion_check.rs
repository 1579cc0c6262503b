// How much of `e^{-i tau x_1} (-Delta)^s (e^{i tau x_1} a)` the first two expansion terms explain.

use fracgo::presets::{plane_gaussian_expansion, EXPANSION_TAUS};

pub fn run() -> fracgo::Result<()> {
    for s in [0.3, 0.5, 0.75] {
        let r = plane_gaussian_expansion(s, &EXPANSION_TAUS)?;
        println!(
            "s = {s:<4}  D0 slope {:+.3} (expected {:+.2})   D1 slope {:+.3} (expected {:+.2})",
            r.fit_d0.slope, r.expected_d0, r.fit_d1.slope, r.expected_d1
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
