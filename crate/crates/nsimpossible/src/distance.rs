//! Attack distances: how far the skewing partition moves the bit f(x)
//! from a uniform coin.
//!
//! Everything is evaluated in the all-zero input block. That loses
//! nothing: inside block (u, v) the box weight depends on x ⊕ y ⊕ (u ∧ v)
//! only, so changing inputs relabels the columns y without changing
//! either term of the distance.
//!
//! With S_b(y) = Σ_{x: f(x)=b} P(x, y | 0, 0), the distance is
//!
//!   d = max{ ½·|Σ_y (S₀(y) − S₁(y))| ,  Σ_y min(S₀(y), S₁(y)) },
//!
//! the first term the raw bias of the bit, the second the probability
//! that even the best guess from y gets it wrong — which is exactly the
//! mass the skewing attack converts into knowledge.

use crate::error::ImpossibleError;
use crate::hamming::HammingSystem;
use nlst_core::BitFunction;

/// Largest n for which the dense 4ⁿ-cell sweep is attempted.
pub const DENSE_DISTANCE_CAP: usize = 14;

/// Output strings are indexed by usize bit patterns, so n is capped by
/// the machine word even on the fast paths.
const DOMAIN_BIT_CAP: usize = 63;

/// The distance the skewing attack achieves on f over the n-box error-ε
/// system.
///
/// Routing: up to [`DENSE_DISTANCE_CAP`] boxes the 4ⁿ sum is evaluated
/// directly for every function form. Past the cap, functions that only
/// depend on the output string through a known structure still work:
/// a mask reduces to the parity of its popcount-many boxes (the ignored
/// boxes marginalize out of both terms), and a table that turns out to
/// be symmetric under bit permutations collapses to a Hamming-weight
/// profile. Anything else is refused with a size-cap error.
pub fn attack_distance(n: usize, eps: f64, f: &BitFunction) -> Result<f64, ImpossibleError> {
    check_boxes_and_error(n, eps)?;
    f.validate(1usize << n)?;
    if n <= DENSE_DISTANCE_CAP {
        return Ok(dense_distance(n, eps, f)?.distance());
    }
    match f {
        BitFunction::Mask(m) => {
            let s = m.count_ones() as usize;
            if s == 0 {
                // constant bit: known outright, full bias, nothing to guess
                return Ok(0.5);
            }
            let parity: Vec<u8> = (0..=s).map(|w| (w & 1) as u8).collect();
            symmetric_attack_distance(s, eps, &parity)
        }
        BitFunction::Table(t) => match weight_profile(n, t) {
            Some(profile) => symmetric_attack_distance(n, eps, &profile),
            None => Err(ImpossibleError::SizeCap {
                what: "dense attack-distance sum",
                n,
                cap: DENSE_DISTANCE_CAP,
            }),
        },
    }
}

/// The distance for a function of the Hamming weight alone:
/// profile[w] is the bit assigned to every output string of weight w.
///
/// Grouping x by its overlap i with y and its j set bits outside y
/// turns the 4ⁿ sweep into an (n+1)-by-(n+1)² sum over multiplicities
/// C(w,i)·C(n−w,j), with every weight-w column counted C(n,w) times.
pub fn symmetric_attack_distance(
    n: usize,
    eps: f64,
    profile: &[u8],
) -> Result<f64, ImpossibleError> {
    check_boxes_and_error(n, eps)?;
    if profile.len() != n + 1 {
        return Err(ImpossibleError::OutOfRegime(format!(
            "weight profile needs n + 1 = {} entries, got {}",
            n + 1,
            profile.len()
        )));
    }
    if let Some(bad) = profile.iter().find(|&&b| b > 1) {
        return Err(ImpossibleError::OutOfRegime(format!(
            "weight profile entries must be bits, got {bad}"
        )));
    }
    let pw = HammingSystem::new(n, eps)?.weights();
    let binom = pascal(n);
    let mut bias = 0.0;
    let mut wrong = 0.0;
    for w in 0..=n {
        let mut s = [0.0f64; 2];
        for i in 0..=w {
            for j in 0..=(n - w) {
                let mass = binom[w][i] * binom[n - w][j] * pw[(w - i) + j];
                s[profile[i + j] as usize] += mass;
            }
        }
        let columns = binom[n][w];
        bias += columns * (s[0] - s[1]);
        wrong += columns * s[0].min(s[1]);
    }
    Ok((0.5 * bias.abs()).max(wrong))
}

/// The maximum-likelihood summary of one attack instance: the correlation
/// between f(X) and the best guess g(Y), plus the biases of both bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlCorrelation {
    /// c = Σ_y |S₀(y) − S₁(y)| = P(f = g) − P(f ≠ g) for the
    /// maximum-likelihood guess g(y) = argmax_b S_b(y).
    pub correlation: f64,
    /// d(f(X)) = ½·|P(f = 0) − P(f = 1)|.
    pub bit_bias: f64,
    /// d(g(Y)) = ½·|P(g = 0) − P(g = 1)|.
    pub guess_bias: f64,
}

/// Compute the maximum-likelihood guess g over y by exact summation and
/// report its correlation with f(X) together with both bit biases. Ties
/// resolve to g = 0. Dense only: n ≤ [`DENSE_DISTANCE_CAP`].
pub fn ml_correlation(n: usize, eps: f64, f: &BitFunction) -> Result<MlCorrelation, ImpossibleError> {
    check_boxes_and_error(n, eps)?;
    if n > DENSE_DISTANCE_CAP {
        return Err(ImpossibleError::SizeCap {
            what: "maximum-likelihood sweep",
            n,
            cap: DENSE_DISTANCE_CAP,
        });
    }
    f.validate(1usize << n)?;
    let sweep = dense_distance(n, eps, f)?;
    Ok(MlCorrelation {
        correlation: sweep.spread,
        bit_bias: 0.5 * sweep.bias.abs(),
        guess_bias: 0.5 * (sweep.guess_mass[0] - sweep.guess_mass[1]).abs(),
    })
}

struct DenseSweep {
    /// Σ_y (S₀ − S₁)
    bias: f64,
    /// Σ_y min(S₀, S₁)
    wrong: f64,
    /// Σ_y |S₀ − S₁|
    spread: f64,
    /// column mass landing on each maximum-likelihood guess value
    guess_mass: [f64; 2],
}

impl DenseSweep {
    fn distance(&self) -> f64 {
        (0.5 * self.bias.abs()).max(self.wrong)
    }
}

fn dense_distance(n: usize, eps: f64, f: &BitFunction) -> Result<DenseSweep, ImpossibleError> {
    let side = 1usize << n;
    let ftab = f.to_table(side);
    let pw = HammingSystem::new(n, eps)?.weights();
    let mut sweep = DenseSweep {
        bias: 0.0,
        wrong: 0.0,
        spread: 0.0,
        guess_mass: [0.0; 2],
    };
    for y in 0..side {
        let mut s = [0.0f64; 2];
        for (x, &fx) in ftab.iter().enumerate() {
            s[fx as usize] += pw[(x ^ y).count_ones() as usize];
        }
        let guess = usize::from(s[1] > s[0]);
        sweep.bias += s[0] - s[1];
        sweep.wrong += s[0].min(s[1]);
        sweep.spread += (s[0] - s[1]).abs();
        sweep.guess_mass[guess] += s[0] + s[1];
    }
    Ok(sweep)
}

fn check_boxes_and_error(n: usize, eps: f64) -> Result<(), ImpossibleError> {
    if n == 0 {
        return Err(ImpossibleError::OutOfRegime(
            "attack distances need at least one box".into(),
        ));
    }
    if n > DOMAIN_BIT_CAP {
        return Err(ImpossibleError::SizeCap {
            what: "output-string domain",
            n,
            cap: DOMAIN_BIT_CAP,
        });
    }
    if !(0.0..=0.5).contains(&eps) {
        return Err(ImpossibleError::OutOfRegime(format!(
            "error rate must lie in [0, ½], got {eps}"
        )));
    }
    Ok(())
}

/// Rows 0..=n of Pascal's triangle in f64.
fn pascal(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![1.0; k + 1];
        for i in 1..k {
            row[i] = prev[i - 1] + prev[i];
        }
        rows.push(row);
    }
    rows
}

/// If t is a function of the Hamming weight alone, return that profile.
fn weight_profile(n: usize, t: &[u8]) -> Option<Vec<u8>> {
    let mut profile = vec![2u8; n + 1];
    for (x, &b) in t.iter().enumerate() {
        let w = x.count_ones() as usize;
        if profile[w] == 2 {
            profile[w] = b;
        } else if profile[w] != b {
            return None;
        }
    }
    Some(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_xor_matches_the_printed_polynomials() {
        for eps in [0.05, 0.1, 0.3] {
            let d1 = attack_distance(1, eps, &BitFunction::xor_all(1)).unwrap();
            let d2 = attack_distance(2, eps, &BitFunction::xor_all(2)).unwrap();
            let d3 = attack_distance(3, eps, &BitFunction::xor_all(3)).unwrap();
            assert!((d1 - eps).abs() < 1e-14);
            assert!((d2 - (2.0 * eps - 2.0 * eps * eps)).abs() < 1e-14);
            let want3 = 3.0 * eps - 6.0 * eps * eps + 4.0 * eps.powi(3);
            assert!((d3 - want3).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetric_path_agrees_with_the_dense_sweep() {
        // parity and a threshold profile, both symmetric, at sizes where
        // the two routes are independent computations
        for n in [4, 7, 10] {
            let parity: Vec<u8> = (0..=n).map(|w| (w & 1) as u8).collect();
            let threshold: Vec<u8> = (0..=n).map(|w| u8::from(w >= n / 2)).collect();
            for profile in [parity, threshold] {
                let table: Vec<u8> = (0..1usize << n)
                    .map(|x| profile[x.count_ones() as usize])
                    .collect();
                for eps in [0.05, 0.2, 0.5] {
                    let dense =
                        attack_distance(n, eps, &BitFunction::Table(table.clone())).unwrap();
                    let fast = symmetric_attack_distance(n, eps, &profile).unwrap();
                    assert!(
                        (dense - fast).abs() < 1e-13,
                        "n={n} eps={eps}: {dense} vs {fast}"
                    );
                }
            }
        }
    }

    #[test]
    fn mask_reduces_to_the_parity_of_its_bits() {
        // a mask ignoring some boxes scores exactly like the smaller
        // all-bits parity; check dense-vs-dense at small n
        for (n, mask) in [(5usize, 0b10110u64), (6, 0b000111u64)] {
            let s = mask.count_ones() as usize;
            for eps in [0.1, 0.3] {
                let via_mask = attack_distance(n, eps, &BitFunction::Mask(mask)).unwrap();
                let via_parity = attack_distance(s, eps, &BitFunction::xor_all(s)).unwrap();
                assert!((via_mask - via_parity).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn beyond_the_cap_masks_and_symmetric_tables_still_route() {
        // n = 16 > cap: the mask path must land on the 3-box parity value
        let d = attack_distance(16, 0.1, &BitFunction::Mask(0b101 << 7)).unwrap();
        let want = attack_distance(3, 0.1, &BitFunction::xor_all(3)).unwrap();
        assert!((d - want).abs() < 1e-14);
        // a symmetric table is recognized and collapsed
        let n = 16;
        let table: Vec<u8> = (0..1usize << n)
            .map(|x: usize| u8::from(x.count_ones() >= 8))
            .collect();
        assert!(attack_distance(n, 0.1, &BitFunction::Table(table)).is_ok());
        // an asymmetric table past the cap is refused
        let mut bad: Vec<u8> = vec![0; 1 << n];
        bad[1] = 1;
        bad[3] = 1;
        assert!(matches!(
            attack_distance(n, 0.1, &BitFunction::Table(bad)),
            Err(ImpossibleError::SizeCap { .. })
        ));
    }

    #[test]
    fn distance_ignores_the_input_block() {
        // recompute both terms inside a nonzero block from the explicit
        // table and compare with the all-zero-block sweep
        let n = 3;
        let eps = 0.17;
        let f = BitFunction::Table(vec![0, 1, 1, 0, 1, 1, 0, 0]);
        let d0 = attack_distance(n, eps, &f).unwrap();
        let sys = HammingSystem::new(n, eps).unwrap().to_system().unwrap();
        let ftab = f.to_table(8);
        let (u, v) = (5usize, 3usize);
        let mut bias = 0.0;
        let mut wrong = 0.0;
        for y in 0..8usize {
            let mut s = [0.0f64; 2];
            for x in 0..8usize {
                s[ftab[x] as usize] += sys.get(&[u, v], &[x, y]);
            }
            // the block has total mass 1, so S_b sums are comparable as is
            bias += s[0] - s[1];
            wrong += s[0].min(s[1]);
        }
        let d_block = (0.5 * bias.abs()).max(wrong);
        assert!((d0 - d_block).abs() < 1e-14);
    }

    #[test]
    fn constant_functions_are_fully_biased() {
        let d = attack_distance(4, 0.2, &BitFunction::Table(vec![0; 16])).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let d = attack_distance(20, 0.2, &BitFunction::Mask(0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ml_summary_reproduces_the_distance() {
        // d = max(bit bias, ½(1 − c)) exactly, since the min column mass
        // is the maximum-likelihood error probability
        let f = BitFunction::Table(vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0]);
        for eps in [0.05, 0.2, 0.4] {
            let d = attack_distance(4, eps, &f).unwrap();
            let ml = ml_correlation(4, eps, &f).unwrap();
            let via_ml = ml.bit_bias.max(0.5 * (1.0 - ml.correlation));
            assert!((d - via_ml).abs() < 1e-14, "eps={eps}");
            assert!(d + 1e-14 >= 0.5 * ml.guess_bias);
        }
    }

    #[test]
    fn domain_guards() {
        let f = BitFunction::xor_all(2);
        assert!(attack_distance(0, 0.1, &f).is_err());
        assert!(attack_distance(64, 0.1, &BitFunction::Mask(1)).is_err());
        assert!(attack_distance(2, 0.51, &f).is_err());
        assert!(attack_distance(2, -0.01, &f).is_err());
        assert!(attack_distance(3, 0.1, &BitFunction::Table(vec![0, 1])).is_err());
        assert!(symmetric_attack_distance(4, 0.1, &[0, 1, 0]).is_err());
        assert!(symmetric_attack_distance(2, 0.1, &[0, 2, 1]).is_err());
        assert!(ml_correlation(15, 0.1, &BitFunction::xor_all(15)).is_err());
    }
}
