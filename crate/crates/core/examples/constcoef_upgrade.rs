// Constant-coefficient ansatz upgraded to an exact solution on `Omega` by a spectral solve.

use fracgo::ansatz::{build_const_coef, const_coef_medium, ConstCoefSetup};
use fracgo::residual::upgrade_const;
use fracgo::spectral::jitter_tau;

pub fn run() -> fracgo::Result<()> {
    let s = 0.6;
    let ansatz = build_const_coef(&ConstCoefSetup::standard(s, 3, 64.0, 1)?)?;
    let medium = const_coef_medium(s)?;
    for tau in [32.0, 64.0] {
        let tau = jitter_tau(ansatz.grid(), tau, s);
        let (_, summary) = upgrade_const(&ansatz, &medium, tau)?;
        println!(
            "tau = {tau:.4}: residual {:.3e} -> {:.3e}; ||v|| / ||u_M|| = {:.3e}",
            summary.residual_before,
            summary.residual_after,
            summary.ratio()
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
