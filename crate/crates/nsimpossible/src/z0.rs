//! The explicit bit-skewing attack: an outside party splits the n-box
//! error system into two equally likely halves whose first half, P^z̄₀,
//! biases the bit f(x) toward 0 as far as the box allows.
//!
//! Inside each input block (u, v), write Σ₀(y) and Σ₁(y) for the mass of
//! the f = 0 and f = 1 outputs in column y. The half is built by scaling
//! every cell with a factor c(x, y, u, v):
//!
//!   Σ₀ < Σ₁:  c = 2 on f = 0 cells,  c = (Σ₁−Σ₀)/Σ₁ on f = 1 cells;
//!   Σ₀ > Σ₁:  c = (Σ₀+Σ₁)/Σ₀ on f = 0 cells,  c = 0 on f = 1 cells;
//!   Σ₀ = Σ₁:  c = 1 (the column is already balanced and stays put).
//!
//! Every column keeps its total Σ₀ + Σ₁, so P^z̄₀ is again a normalized
//! non-signalling system, and ½·P^z̄₀ ≤ P entrywise makes
//! {(½, P^z̄₀), (½, 2P − P^z̄₀)} a valid two-element partition of P.

use crate::error::ImpossibleError;
use crate::hamming::{HammingSystem, EXPLICIT_TABLE_CAP};
use nlst_core::{BitFunction, NSPartition, System};

/// A built attack: the parent system, its skewed half, and the function
/// whose output bit the skew targets.
#[derive(Debug, Clone)]
pub struct AttackZ0 {
    n: usize,
    eps: f64,
    f: BitFunction,
    parent: System,
    skewed: System,
}

/// Build the skewing attack on f over the n-box error-ε system,
/// materializing both the parent and the skewed half explicitly.
pub fn build_z0_attack(n: usize, eps: f64, f: &BitFunction) -> Result<AttackZ0, ImpossibleError> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(ImpossibleError::OutOfRegime(format!(
            "skewing attack needs ε ∈ (0, ½], got {eps}"
        )));
    }
    if n == 0 || n > EXPLICIT_TABLE_CAP {
        return Err(ImpossibleError::SizeCap {
            what: "explicit skewed table",
            n,
            cap: EXPLICIT_TABLE_CAP,
        });
    }
    let ham = HammingSystem::new(n, eps)?;
    let side = 1usize << n;
    f.validate(side)?;
    let ftab = f.to_table(side);
    let parent = ham.to_system()?;

    let mut table = parent.table().to_vec();
    // cells of block (u, v) start at ((u·side + x)·side + v)·side + y;
    // columns are indexed by y with stride `side` between x values
    let mut sums0 = vec![0.0f64; side];
    let mut sums1 = vec![0.0f64; side];
    for u in 0..side {
        for v in 0..side {
            let block = ((u * side) * side + v) * side;
            let row = |x: usize| block + x * side * side;
            sums0.iter_mut().for_each(|s| *s = 0.0);
            sums1.iter_mut().for_each(|s| *s = 0.0);
            for x in 0..side {
                let base = row(x);
                let sums = if ftab[x] == 0 { &mut sums0 } else { &mut sums1 };
                for (y, s) in sums.iter_mut().enumerate() {
                    *s += table[base + y];
                }
            }
            for x in 0..side {
                let base = row(x);
                let zero = ftab[x] == 0;
                for y in 0..side {
                    let (s0, s1) = (sums0[y], sums1[y]);
                    let c = if s0 < s1 {
                        if zero {
                            2.0
                        } else {
                            (s1 - s0) / s1
                        }
                    } else if s0 > s1 {
                        if zero {
                            (s0 + s1) / s0
                        } else {
                            0.0
                        }
                    } else {
                        1.0
                    };
                    table[base + y] *= c;
                }
            }
        }
    }

    let skewed = System::new(parent.scenario().clone(), table, 1e-9)?;
    Ok(AttackZ0 {
        n,
        eps,
        f: f.clone(),
        parent,
        skewed,
    })
}

impl AttackZ0 {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn bit_function(&self) -> &BitFunction {
        &self.f
    }

    /// The attacked n-box system P.
    pub fn parent(&self) -> &System {
        &self.parent
    }

    /// The skewed half P^z̄₀ with ½·P^z̄₀ ≤ P entrywise.
    pub fn skewed_system(&self) -> &System {
        &self.skewed
    }

    /// The scaling factor c(x, y, u, v) = P^z̄₀ / P ∈ [0, 2]. Well-defined
    /// because every parent cell is positive for ε > 0.
    pub fn factor(&self, x: usize, y: usize, u: usize, v: usize) -> f64 {
        let inputs = [u, v];
        let outputs = [x, y];
        self.skewed.get(&inputs, &outputs) / self.parent.get(&inputs, &outputs)
    }

    /// The two-element partition {(½, P^z̄₀), (½, 2P − P^z̄₀)}.
    pub fn partition(&self) -> NSPartition {
        let mirror: Vec<f64> = self
            .parent
            .table()
            .iter()
            .zip(self.skewed.table())
            .map(|(p, z)| (2.0 * p - z).max(0.0))
            .collect();
        let other = System::new_unchecked(self.parent.scenario().clone(), mirror);
        NSPartition::new(vec![(0.5, self.skewed.clone()), (0.5, other)])
    }
}
