//! Dense nonsignaling constraint matrices.

use crate::error::AttackError;
use nlst_core::{for_each_ns_constraint, Scenario};
use nlst_optkernel::Mat;

/// Number of simplified nonsignaling equalities for a scenario:
/// Σ_party (|U_party|−1) · Π_{others} |U||X|.
pub fn ns_constraint_count(scenario: &Scenario) -> u128 {
    let n = scenario.parties();
    if n <= 1 {
        return 0;
    }
    let mut total: u128 = 0;
    for party in 0..n {
        let mut contexts: u128 = 1;
        for other in 0..n {
            if other != party {
                contexts = contexts
                    .saturating_mul(scenario.input_sizes()[other] as u128)
                    .saturating_mul(scenario.output_sizes()[other] as u128);
            }
        }
        total = total
            .saturating_add(contexts.saturating_mul(scenario.input_sizes()[party] as u128 - 1));
    }
    total
}

/// Build the dense coefficient matrix whose rows are the simplified
/// nonsignaling equalities, in canonical row order (varied party from last
/// to first, contexts in flattening order, adjacent input pairs). A
/// single-party scenario yields a 0×cells matrix. For two binary parties
/// this is the standard 8×16 matrix with +1 on the varied party's
/// lower-input cells and −1 on its upper-input cells.
pub fn build_ns_constraint_matrix(scenario: &Scenario) -> Result<Mat, AttackError> {
    let cells = scenario.cells();
    let rows = ns_constraint_count(scenario);
    const ENTRY_CAP: u128 = 1 << 28;
    if rows.saturating_mul(cells) > ENTRY_CAP {
        return Err(AttackError::TooLarge(format!(
            "nonsignaling matrix would hold {} entries (cap {})",
            rows.saturating_mul(cells),
            ENTRY_CAP
        )));
    }
    let cells = cells as usize;
    let mut data: Vec<f64> = Vec::with_capacity(rows as usize * cells);
    for_each_ns_constraint(scenario, |c| {
        let start = data.len();
        data.resize(start + cells, 0.0);
        let row = &mut data[start..];
        for &cell in c.plus_cells {
            row[cell] += 1.0;
        }
        for &cell in c.minus_cells {
            row[cell] -= 1.0;
        }
    });
    Ok(Mat::from_flat(rows as usize, cells, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_binary_matrix_is_the_printed_one() {
        let a = build_ns_constraint_matrix(&Scenario::bipartite_binary()).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (8, 16));
        let flat = |u: usize, x: usize, v: usize, y: usize| 8 * u + 4 * x + 2 * v + y;
        // rows 0..4 vary the second party against contexts (u,x), u-major
        let mut expected = vec![vec![0.0; 16]; 8];
        let mut r = 0;
        for u in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    expected[r][flat(u, x, 0, y)] = 1.0;
                    expected[r][flat(u, x, 1, y)] = -1.0;
                }
                r += 1;
            }
        }
        for v in 0..2 {
            for y in 0..2 {
                for x in 0..2 {
                    expected[r][flat(0, x, v, y)] = 1.0;
                    expected[r][flat(1, x, v, y)] = -1.0;
                }
                r += 1;
            }
        }
        for i in 0..8 {
            for j in 0..16 {
                assert_eq!(a[(i, j)], expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn single_party_matrix_is_empty() {
        let s = Scenario::new(vec![3], vec![2]).unwrap();
        let a = build_ns_constraint_matrix(&s).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (0, 6));
    }

    #[test]
    fn size_cap_enforced() {
        let s = Scenario::new(vec![8; 6], vec![8; 6]).unwrap();
        assert!(matches!(
            build_ns_constraint_matrix(&s),
            Err(AttackError::TooLarge(_))
        ));
    }
}
