//! The n-fold product of symmetric error-ε boxes, addressed through
//! Hamming distances instead of an explicit 2^{4n} table.
//!
//! Each of the n independent boxes answers the binary game x ⊕ y = u·v
//! correctly with probability 1 − ε and uniformly otherwise. Viewed as a
//! bipartite system — one side holding the n-bit string x and input
//! u ∈ {0,1}ⁿ, the other y and v — a cell value depends only on how many
//! boxes lost:
//!
//!   P(x, y | u, v) = ((1−ε)/2)^{n−k} · (ε/2)^k,   k = |x ⊕ y ⊕ (u ∧ v)|,
//!
//! so any cell is evaluated on demand with one XOR and a popcount, and the
//! full table is only materialized when a caller genuinely needs it.

use crate::error::ImpossibleError;
use nlst_core::{Scenario, System};

/// Largest n for which explicit 2^{4n}-cell tables are materialized
/// (n = 6 is a 16.7M-cell, ~134 MB table; n = 7 would quadruple that).
pub const EXPLICIT_TABLE_CAP: usize = 6;

/// n independent error-ε boxes in the bipartite view.
#[derive(Debug, Clone, PartialEq)]
pub struct HammingSystem {
    n: usize,
    eps: f64,
}

impl HammingSystem {
    /// A family member with n ≥ 1 boxes and per-box error ε ∈ [0, ½].
    pub fn new(n: usize, eps: f64) -> Result<Self, ImpossibleError> {
        if n == 0 || n > 63 {
            return Err(ImpossibleError::OutOfRegime(format!(
                "box count must lie in 1..=63, got {n}"
            )));
        }
        if !(0.0..=0.5).contains(&eps) {
            return Err(ImpossibleError::OutOfRegime(format!(
                "per-box error must lie in [0, ½], got {eps}"
            )));
        }
        Ok(HammingSystem { n, eps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// The bipartite scenario: both sides hold 2ⁿ inputs and 2ⁿ outputs.
    pub fn scenario(&self) -> Scenario {
        let side = 1usize << self.n;
        Scenario::new(vec![side, side], vec![side, side])
            .expect("power-of-two alphabets are valid")
    }

    /// Cell weights by loss count: `weights()[k]` = ((1−ε)/2)^{n−k}(ε/2)^k.
    pub fn weights(&self) -> Vec<f64> {
        let win = (1.0 - self.eps) / 2.0;
        let lose = self.eps / 2.0;
        (0..=self.n)
            .map(|k| win.powi((self.n - k) as i32) * lose.powi(k as i32))
            .collect()
    }

    /// P(x, y | u, v), evaluated from the loss count alone.
    pub fn cell(&self, x: usize, y: usize, u: usize, v: usize) -> f64 {
        let k = ((x ^ y) ^ (u & v)).count_ones() as usize;
        let win = (1.0 - self.eps) / 2.0;
        let lose = self.eps / 2.0;
        win.powi((self.n - k) as i32) * lose.powi(k as i32)
    }

    /// Materialize the full table as a validated system (n ≤ cap).
    pub fn to_system(&self) -> Result<System, ImpossibleError> {
        if self.n > EXPLICIT_TABLE_CAP {
            return Err(ImpossibleError::SizeCap {
                what: "explicit table",
                n: self.n,
                cap: EXPLICIT_TABLE_CAP,
            });
        }
        let side = 1usize << self.n;
        let pw = self.weights();
        let mut table = Vec::with_capacity(side * side * side * side);
        // canonical flattening: party-major (input, output) pairs with the
        // first party slowest, i.e. (u, x, v, y) lexicographic
        for u in 0..side {
            for x in 0..side {
                for v in 0..side {
                    for y in 0..side {
                        table.push(pw[((x ^ y) ^ (u & v)).count_ones() as usize]);
                    }
                }
            }
        }
        Ok(System::new(self.scenario(), table, 1e-9)?)
    }
}
