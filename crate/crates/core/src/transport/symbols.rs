use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{MultiplierSpec, PolyTerm};

pub const DEFAULT_NU_MAX: usize = 12;

/// `binom(s, j)` for real `s` by the product recurrence.
pub fn generalized_binomial(s: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (s - i as f64) / (i + 1) as f64)
}

fn binomial(j: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (j - i) as f64 / (i + 1) as f64)
}

/// Coefficients `c'_{s,j,k} = binom(s, j) binom(j, k) 2^{j-k}` of the expansion of
/// `|xi + tau alpha|^{2s} - tau^{2s}` in powers of `tau`.
#[derive(Clone, Debug, Serialize)]
pub struct ConstCoefSymbolTable {
    s: f64,
    direction: [f64; 2],
    nu_max: usize,
    /// `coefficients[j][k]` for `0 <= k <= j <= nu_max`
    coefficients: Vec<Vec<f64>>,
}

impl ConstCoefSymbolTable {
    pub fn new(s: f64, direction: [f64; 2], nu_max: usize) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::Domain {
                what: "s",
                value: s,
                range: "(0, 1]",
            });
        }
        let n = (direction[0].powi(2) + direction[1].powi(2)).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("direction {direction:?} is not a unit vector")));
        }
        if nu_max == 0 {
            return Err(Error::invalid("nu_max must be positive"));
        }
        let coefficients = (0..=nu_max)
            .map(|j| {
                let b = generalized_binomial(s, j);
                (0..=j)
                    .map(|k| b * binomial(j, k) * 2f64.powi((j - k) as i32))
                    .collect()
            })
            .collect();
        Ok(Self {
            s,
            direction,
            nu_max,
            coefficients,
        })
    }

    pub fn with_default_order(s: f64, direction: [f64; 2]) -> Result<Self> {
        Self::new(s, direction, DEFAULT_NU_MAX)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn direction(&self) -> [f64; 2] {
        self.direction
    }

    pub fn nu_max(&self) -> usize {
        self.nu_max
    }

    pub fn coefficient(&self, j: usize, k: usize) -> f64 {
        if k > j || j > self.nu_max {
            0.0
        } else {
            self.coefficients[j][k]
        }
    }

    fn check_index(&self, nu: usize, l: usize) -> Result<()> {
        if nu == 0 || nu > self.nu_max || l >= nu {
            return Err(Error::invalid(format!(
                "symbol index (nu, l) = ({nu}, {l}) outside 1 <= nu <= {}, 0 <= l < nu",
                self.nu_max
            )));
        }
        Ok(())
    }

    /// Pairs `(j, k)` with `j >= 1`, `0 <= k <= j`, `j + k = nu - l`.
    pub fn pairs(&self, nu: usize, l: usize) -> Result<Vec<(usize, usize)>> {
        self.check_index(nu, l)?;
        let d = nu - l;
        Ok((0..=d / 2).map(|k| (d - k, k)).filter(|&(j, _)| j >= 1).collect())
    }

    /// Number of nonzero-index pairs in `psi_{nu,l}`: `floor((nu - l) / 2) + 1`.
    pub fn pair_count(nu: usize, l: usize) -> usize {
        (nu - l) / 2 + 1
    }

    /// `psi_{nu,l}(xi) = sum c'_{s,j,k} |xi|^{2k} (alpha . xi)^{j-k}`.
    pub fn psi(&self, nu: usize, l: usize) -> Result<MultiplierSpec> {
        let terms = self
            .pairs(nu, l)?
            .into_iter()
            .map(|(j, k)| PolyTerm {
                coefficient: self.coefficient(j, k),
                xi_sq_power: k as u32,
                alpha_xi_power: (j - k) as u32,
            })
            .collect();
        Ok(MultiplierSpec::Polynomial {
            direction: self.direction,
            terms,
        })
    }

    /// Rows `nu,l,j,k,c`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "nu,l,j,k,c")?;
        for nu in 1..=self.nu_max {
            for l in 0..nu {
                for (j, k) in self.pairs(nu, l)? {
                    writeln!(w, "{nu},{l},{j},{k},{:.17e}", self.coefficient(j, k))?;
                }
            }
        }
        Ok(())
    }
}

pub fn const_coef_symbol(table: &ConstCoefSymbolTable, nu: usize, l: usize) -> Result<MultiplierSpec> {
    table.psi(nu, l)
}
