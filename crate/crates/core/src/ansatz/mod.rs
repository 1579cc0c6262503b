//! Full geometrical-optics ansatze: exponent lattices, cutoffs, builders for both regimes and
//! the constant-coefficient expansion, and evaluation at a frequency.

mod builders;
mod cutoff;
mod go;
mod lattice;
mod recipe;

pub use builders::{build_const_coef, build_high_s, build_low_s, ConstCoefSetup, RayGeometry};
pub use cutoff::{box_cutoff, bump_cutoff};
pub use go::{AmplitudeTerm, AnsatzManifest, GOAnsatz, PhaseTerm, Regime, POINTS_PER_WAVELENGTH};
pub use lattice::{exponent_lattice, ExponentLattice};
pub use recipe::{const_coef_medium, AnsatzRecipe, BoxSpec};
