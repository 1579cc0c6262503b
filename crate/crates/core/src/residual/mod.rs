//! Residuals of ansatze, frequency sweeps with log-log slope fits, expansion-order checks,
//! the phase-correction ablation and the constant-coefficient exact-solution upgrade.

mod ablation;
mod expansion;
mod fit;
mod operator;
mod sweep;
mod upgrade;

pub use ablation::{phase_correction_ablation, AblationReport};
pub use expansion::{expansion_order_check, ExpansionReport};
pub use fit::{fit_log2_slope, SlopeFit};
pub use operator::{apply_helmholtz, residual};
pub use sweep::{measure, predicted_slope, tau_sweep, Prediction, Refinement, SweepReport, REFINEMENT_TOLERANCE};
pub use upgrade::{upgrade_const, UpgradeSummary, SOURCE_WINDOW};
