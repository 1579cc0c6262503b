use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEDUP_TOL: f64 = 1e-9;

/// Amplitude exponents `alpha_0 = 0 < alpha_1 < ...` drawn from `N + (2s - floor(2s)) N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentLattice {
    s: f64,
    cutoff: f64,
    entries: Vec<f64>,
}

pub fn exponent_lattice(s: f64, cutoff: f64) -> Result<ExponentLattice> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain {
            what: "s",
            value: s,
            range: "(0, 1)",
        });
    }
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::invalid("lattice cutoff must be positive and finite"));
    }
    let delta = 2.0 * s - (2.0 * s).floor();
    let mut entries = Vec::new();
    let mut m = 0.0;
    while m <= cutoff + DEDUP_TOL {
        if delta < DEDUP_TOL {
            entries.push(m);
        } else {
            let mut n = 0.0;
            while m + n * delta <= cutoff + DEDUP_TOL {
                entries.push(m + n * delta);
                n += 1.0;
            }
        }
        m += 1.0;
    }
    entries.sort_by(f64::total_cmp);
    entries.dedup_by(|a, b| (*a - *b).abs() < DEDUP_TOL);
    Ok(ExponentLattice { s, cutoff, entries })
}

impl ExponentLattice {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `alpha_l`, if within the cutoff.
    pub fn alpha(&self, l: usize) -> Option<f64> {
        self.entries.get(l).copied()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.entries.iter().any(|e| (e - x).abs() < DEDUP_TOL)
    }

    /// Absorption shifts that must stay in the lattice: `2s - 1` for `s > 1/2`, `2s` and `1` for
    /// `s < 1/2`, `1` for `s = 1/2`.
    pub fn shifts(&self) -> Vec<f64> {
        let s = self.s;
        if s > 0.5 + DEDUP_TOL {
            vec![2.0 * s - 1.0]
        } else if s < 0.5 - DEDUP_TOL {
            vec![2.0 * s, 1.0]
        } else {
            vec![1.0]
        }
    }

    /// Every shifted entry below the cutoff is itself an entry.
    pub fn is_closed(&self) -> bool {
        self.shifts().iter().all(|d| {
            self.entries
                .iter()
                .map(|a| a + d)
                .filter(|x| *x <= self.cutoff + DEDUP_TOL)
                .all(|x| self.contains(x))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn worked_lattices() {
        assert!(close(
            exponent_lattice(0.75, 2.0).unwrap().entries(),
            &[0.0, 0.5, 1.0, 1.5, 2.0]
        ));
        assert!(close(
            exponent_lattice(0.5, 3.0).unwrap().entries(),
            &[0.0, 1.0, 2.0, 3.0]
        ));
        let l = exponent_lattice(0.3, 1.3).unwrap();
        assert!(close(l.entries(), &[0.0, 0.6, 1.0, 1.2]));
        assert!((l.alpha(1).unwrap() - 0.6).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn lattices_are_closed_and_increasing(s in 0.02f64..0.98, cutoff in 0.1f64..4.0) {
            let l = exponent_lattice(s, cutoff).unwrap();
            prop_assert_eq!(l.entries()[0], 0.0);
            prop_assert!(l.entries().windows(2).all(|w| w[1] > w[0]));
            prop_assert!(l.entries().iter().all(|e| *e <= cutoff + 1e-9));
            prop_assert!(l.is_closed());
        }
    }
}
