// Frequency sweep of the truncation residual for a high-order ansatz, compared with the
// predicted decay exponent.

use fracgo::presets::high_s_recipe;
use fracgo::residual::tau_sweep;

pub fn run() -> fracgo::Result<()> {
    let recipe = high_s_recipe(0.75, 2, 1.0);
    let report = tau_sweep(&recipe, &[16.0, 32.0, 64.0, 128.0], false)?;
    println!("{:>6}  {:>14}  {:>14}", "tau", "||Lu||_L2", "||Lu||_H-1");
    for ((t, a), b) in report.taus.iter().zip(&report.residual_b0).zip(&report.residual_b1) {
        println!("{t:>6}  {a:>14.6e}  {b:>14.6e}");
    }
    println!(
        "fitted slope {:.3} +- {:.3}; predicted {:.3} ({})",
        report.slope(),
        report.fit.stderr,
        report.prediction.slope,
        report.prediction.note
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
