use rand::Rng;

use crate::error::SystemError;
use crate::system::System;

/// The eight local relabellings used to symmetrize a bipartite binary
/// system. Each maps (u, x, v, y) to a new cell; all preserve the parity
/// x⊕y⊕u·v, so the CHSH value is invariant under every one of them.
///
/// They are generated by composing one of {identity, both-flip-outputs}
/// with one of {identity, three input/output twists}:
/// (u, x⊕1, v, y⊕1); (u, x⊕u, v⊕1, y); (u⊕1, x, v, y⊕v);
/// (u⊕1, x⊕u⊕1, v⊕1, y⊕v).
pub type Cell = (usize, usize, usize, usize);

/// How many symmetrizing relabellings there are; `symmetry_map` accepts
/// `which` in `0..SYMMETRY_MAP_COUNT`.
pub const SYMMETRY_MAP_COUNT: usize = 8;

fn flip_outputs((u, x, v, y): Cell) -> Cell {
    (u, x ^ 1, v, y ^ 1)
}
fn twist_bob_input((u, x, v, y): Cell) -> Cell {
    (u, x ^ u, v ^ 1, y)
}
fn twist_alice_input((u, x, v, y): Cell) -> Cell {
    (u ^ 1, x, v, y ^ v)
}
fn twist_both_inputs((u, x, v, y): Cell) -> Cell {
    (u ^ 1, x ^ u ^ 1, v ^ 1, y ^ v)
}

/// The `which`-th relabelling applied to one (u, x, v, y) cell. Exposed so
/// multi-box constructions can act with an independent map on each box of
/// a joint table; the maps form the orbit used by [`depolarize`].
pub fn symmetry_map(which: usize, cell: Cell) -> Cell {
    let first = if which & 1 == 1 {
        flip_outputs(cell)
    } else {
        cell
    };
    match which >> 1 {
        0 => first,
        1 => twist_bob_input(first),
        2 => twist_alice_input(first),
        3 => twist_both_inputs(first),
        _ => unreachable!("eight maps"),
    }
}

fn relabelled_table(sys: &System, which: usize) -> Vec<f64> {
    let s = sys.scenario();
    let mut t = vec![0.0; 16];
    for u in 0..2 {
        for v in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let (mu, mx, mv, my) = symmetry_map(which, (u, x, v, y));
                    t[s.index(&[u, v], &[x, y])] = sys.get(&[mu, mv], &[mx, my]);
                }
            }
        }
    }
    t
}

fn require_bipartite_binary(sys: &System) -> Result<(), SystemError> {
    if !sys.scenario().is_bipartite_binary() {
        return Err(sys
            .scenario()
            .shape_error("bipartite binary scenario [2,2] → [2,2]"));
    }
    Ok(())
}

/// Apply one of the eight symmetrizing relabellings chosen uniformly at
/// random. Averaged over the choice this is [`depolarize_expectation`];
/// every individual outcome already preserves the CHSH value.
pub fn depolarize(sys: &System, rng: &mut impl Rng) -> Result<System, SystemError> {
    require_bipartite_binary(sys)?;
    let which = rng.gen_range(0..8usize);
    let t = relabelled_table(sys, which);
    Ok(System::new_unchecked(sys.scenario().clone(), t))
}

/// The deterministic average over all eight relabellings. The result is
/// always an unbiased box: entries depend only on the parity x⊕y⊕u·v, with
/// error parameter 1 − CHSH(sys). Idempotent, and a fixed point exactly on
/// unbiased boxes.
pub fn depolarize_expectation(sys: &System) -> Result<System, SystemError> {
    require_bipartite_binary(sys)?;
    let mut acc = vec![0.0; 16];
    for which in 0..8 {
        for (a, b) in acc.iter_mut().zip(relabelled_table(sys, which)) {
            *a += b / 8.0;
        }
    }
    Ok(System::new_unchecked(sys.scenario().clone(), acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::chsh_value;
    use crate::builders::{pr_box, unbiased_pr_box};
    use crate::rng::rng_from_seed;
    use crate::scenario::Scenario;

    const SEED: u64 = 0xBE11_7E57;

    fn max_abs_diff(a: &System, b: &System) -> f64 {
        a.table()
            .iter()
            .zip(b.table())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn unbiased_box_is_a_fixed_point() {
        for eps in [0.0, 0.1, 0.25, 0.5] {
            let b = unbiased_pr_box(eps).unwrap();
            let d = depolarize_expectation(&b).unwrap();
            assert!(max_abs_diff(&b, &d) < 1e-15);
        }
    }

    #[test]
    fn expectation_unbiases_while_preserving_chsh() {
        // deterministic x = y = 0: biased, CHSH 3/4
        let s = Scenario::bipartite_binary();
        let mut t = vec![0.0; 16];
        for u in 0..2 {
            for v in 0..2 {
                t[s.index(&[u, v], &[0, 0])] = 1.0;
            }
        }
        let det = System::new(s, t, 1e-12).unwrap();
        let d = depolarize_expectation(&det).unwrap();
        assert!((chsh_value(&d).unwrap() - 0.75).abs() < 1e-15);
        let want = unbiased_pr_box(1.0 - 0.75).unwrap();
        assert!(max_abs_diff(&d, &want) < 1e-15);
        // idempotent
        let dd = depolarize_expectation(&d).unwrap();
        assert!(max_abs_diff(&d, &dd) < 1e-15);
    }

    #[test]
    fn pr_box_is_invariant() {
        let d = depolarize_expectation(&pr_box()).unwrap();
        assert!(max_abs_diff(&d, &pr_box()) < 1e-15);
    }

    #[test]
    fn sampled_map_preserves_chsh_and_nonsignalling() {
        let mut rng = rng_from_seed(SEED);
        let src = crate::builders::noisy_singlet_system(0.2).unwrap();
        let c0 = chsh_value(&src).unwrap();
        for _ in 0..32 {
            let d = depolarize(&src, &mut rng).unwrap();
            assert!((chsh_value(&d).unwrap() - c0).abs() < 1e-12);
            assert!(d.is_nonsignalling(1e-12).ok);
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let s = Scenario::new(vec![3, 2], vec![2, 2]).unwrap();
        let sys = System::new(s, vec![0.25; 24], 1e-12).unwrap();
        let mut rng = rng_from_seed(SEED);
        assert!(depolarize(&sys, &mut rng).is_err());
        assert!(depolarize_expectation(&sys).is_err());
    }
}
