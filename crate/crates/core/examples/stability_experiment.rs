// Noise-to-error exponent of the regularized inversion, compared with the predicted Hölder
// exponent. A reduced grid keeps the run short; `StabilityConfig::default()` is the full setup.

use fracgo::xray::{optimal_tau, predicted_gamma, stability_experiment, StabilityConfig};

pub fn run() -> fracgo::Result<()> {
    for s in [0.5, 0.75, 0.9] {
        println!(
            "s = {s}: tau(1e-4) = {:.2}, gamma(t_M = 4) = {:.4}, gamma(t_M = inf) = {:.4}",
            optimal_tau(1e-4, s)?,
            predicted_gamma(s, 4.0)?,
            predicted_gamma(s, f64::INFINITY)?
        );
    }
    let cfg = StabilityConfig {
        grid_size: 32,
        n_base: 32,
        n_dirs: 64,
        deltas: vec![1e-2, 1e-3, 1e-4],
        seeds: vec![1, 2],
        ..StabilityConfig::default()
    };
    let report = stability_experiment(&cfg)?;
    println!("{:>8}  {:>8}  {:>10}  {:>10}", "delta", "tau", "noise", "error");
    for c in &report.cells {
        println!(
            "{:>8.0e}  {:>8.2}  {:>10.3e}  {:>10.4}",
            c.delta, c.tau, c.noise_level, c.median_error
        );
    }
    println!(
        "fitted exponent {:.4}, predicted {:.4}, ratio {:.3}",
        report.fitted_exponent, report.predicted_gamma, report.ratio
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
