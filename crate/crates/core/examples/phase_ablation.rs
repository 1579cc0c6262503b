// Low-order regime with a constant potential: the residual stalls without the phase correction
// `phi_1` and decays once it is included.

use fracgo::presets::low_s_recipe;
use fracgo::residual::phase_correction_ablation;

pub fn run() -> fracgo::Result<()> {
    let report = phase_correction_ablation(&low_s_recipe(0.3, 1.0, true), &[16.0, 32.0, 64.0, 128.0], false)?;
    println!("{:>6}  {:>14}  {:>14}", "tau", "without phi1", "with phi1");
    for (i, t) in report.with_phi1.taus.iter().enumerate() {
        println!(
            "{t:>6}  {:>14.6e}  {:>14.6e}",
            report.without_phi1.residual_b0[i], report.with_phi1.residual_b0[i]
        );
    }
    let (off, on) = report.slopes();
    println!(
        "slopes: without {off:+.3} (predicted {:+.2}), with {on:+.3} (predicted {:+.2})",
        report.without_phi1.prediction.slope, report.with_phi1.prediction.slope
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
