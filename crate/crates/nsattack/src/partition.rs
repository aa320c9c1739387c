//! Partition-element tests and the closed-form optimal partition of a
//! bipartite binary system.

use crate::error::AttackError;
use nlst_core::vertices::deterministic_system;
use nlst_core::{NSPartition, System};

/// True iff `(p, candidate)` can appear in a nonsignaling partition of
/// `parent`: candidate is a valid nonsignaling system and p·candidate ≤
/// parent entrywise within tol.
pub fn is_partition_element(
    parent: &System,
    p: f64,
    candidate: &System,
    tol: f64,
) -> Result<bool, AttackError> {
    if parent.scenario() != candidate.scenario() {
        return Err(AttackError::Shape(
            "parent and candidate live in different scenarios".into(),
        ));
    }
    if !(0.0..=1.0 + tol).contains(&p) {
        return Ok(false);
    }
    if !candidate.is_nonsignalling(tol.max(1e-12)).ok {
        return Ok(false);
    }
    Ok(parent
        .table()
        .iter()
        .zip(candidate.table())
        .all(|(pa, ca)| p * ca <= pa + tol))
}

/// Table cell (x, y, u, v) whose value P(x y | u v) is an element's weight.
type WeightCell = (usize, usize, usize, usize);
/// Deterministic responses (first party's outputs by u, second's by v).
type Responses = ([usize; 2], [usize; 2]);

/// The eight deterministic strategies of the closed-form partition, each
/// paired with the table cell whose value is its weight.
const PARTITION_STRATEGIES: [(WeightCell, Responses); 8] = [
    ((1, 0, 0, 0), ([1, 0], [0, 1])), // P(10|00) → x=1−u, y=v
    ((0, 1, 0, 0), ([0, 1], [1, 0])), // P(01|00) → x=u,   y=1−v
    ((1, 0, 1, 0), ([0, 1], [0, 0])), // P(10|10) → x=u,   y=0
    ((0, 1, 1, 0), ([1, 0], [1, 1])), // P(01|10) → x=1−u, y=1
    ((1, 0, 0, 1), ([1, 1], [1, 0])), // P(10|01) → x=1,   y=1−v
    ((0, 1, 0, 1), ([0, 0], [0, 1])), // P(01|01) → x=0,   y=v
    ((0, 0, 1, 1), ([0, 0], [0, 0])), // P(00|11) → x=0,   y=0
    ((1, 1, 1, 1), ([1, 1], [1, 1])), // P(11|11) → x=1,   y=1
];

/// Decompose a bipartite binary system into eight local deterministic
/// elements (weights read off the table) plus the normalized remainder,
/// which on the symmetric error-ε family is exactly the PR box with weight
/// 1−4ε. Errors out when a weight or the remainder leaves the valid
/// regime (for the symmetric family: ε > 1/4).
pub fn optimal_single_box_partition(sys: &System) -> Result<NSPartition, AttackError> {
    let scenario = sys.scenario();
    if !scenario.is_bipartite_binary() {
        return Err(AttackError::Shape(
            "closed-form partition needs a bipartite binary system".into(),
        ));
    }
    let check = sys.is_nonsignalling(1e-9);
    if !check.ok {
        return Err(AttackError::NotNonsignaling(check.worst_residual));
    }

    let mut elements = Vec::with_capacity(9);
    let mut remainder: Vec<f64> = sys.table().to_vec();
    let mut total = 0.0;
    for ((x, y, u, v), (fa, fb)) in PARTITION_STRATEGIES {
        let w = sys.get(&[u, v], &[x, y]);
        if w < -1e-12 {
            return Err(AttackError::OutOfRegime(format!(
                "weight P({x}{y}|{u}{v}) = {w} is negative"
            )));
        }
        let det = deterministic_system(scenario, &[fa.to_vec(), fb.to_vec()])?;
        for (r, d) in remainder.iter_mut().zip(det.table()) {
            *r -= w * d;
        }
        total += w;
        elements.push((w, det));
    }
    let rest = 1.0 - total;
    if rest < -1e-12 {
        return Err(AttackError::OutOfRegime(format!(
            "deterministic weights sum to {total} > 1"
        )));
    }
    let rest_sys = if rest > 1e-12 {
        if let Some(bad) = remainder.iter().find(|v| **v < -1e-9) {
            return Err(AttackError::OutOfRegime(format!(
                "remainder entry {bad} is negative"
            )));
        }
        let table: Vec<f64> = remainder.iter().map(|v| (v / rest).max(0.0)).collect();
        let sys = System::new_unchecked(scenario.clone(), table);
        let rc = sys.is_nonsignalling(1e-8);
        if !rc.ok {
            return Err(AttackError::OutOfRegime(format!(
                "remainder violates nonsignaling (residual {})",
                rc.worst_residual
            )));
        }
        sys
    } else {
        // weightless remainder: represent it by the PR box it tends to
        nlst_core::builders::pr_box()
    };
    elements.push((rest, rest_sys));

    let partition = NSPartition::new(elements);
    let report = partition.validate(sys, 1e-9)?;
    if !report.ok {
        return Err(AttackError::OutOfRegime(format!(
            "partition does not reproduce the parent: {report:?}"
        )));
    }
    Ok(partition)
}
