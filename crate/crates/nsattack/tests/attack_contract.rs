//! Contract tests for the attack pipeline on systems beyond the
//! hand-checkable fixtures: strong duality on random nonsignaling
//! mixtures, witness validity, the local-part inequality, invariance
//! under depolarization, the tensor structure of the joint constraint
//! matrix, and product-certificate bounds on many boxes.

use nlst_core::builders::{pr_box, unbiased_pr_box};
use nlst_core::depolarize::depolarize_expectation;
use nlst_core::rng::{child_seed, rng_from_seed};
use nlst_core::transform::{group_parties, tensor};
use nlst_core::vertices::local_deterministic_vertices;
use nlst_core::{BitFunction, Scenario, System};
use nlst_nsattack::{
    build_ns_constraint_matrix, chsh_identity_certificate, distance_from_uniform_lp, local_part,
    tensor_dual, xor_bound, DistanceProgram,
};
use rand::Rng;

const SEED: u64 = 0xBE11_7E57;

/// A random nonsignaling bipartite binary system: a random convex mixture
/// of the sixteen local deterministic vertices and the PR box.
fn random_ns_system(seed: u64) -> System {
    let mut rng = rng_from_seed(seed);
    let scenario = Scenario::bipartite_binary();
    let mut weights: Vec<f64> = (0..17).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut table = vec![0.0; 16];
    let vertices = local_deterministic_vertices(&scenario, 1 << 10).unwrap();
    for (vertex, &w) in vertices.zip(&weights) {
        for (t, v) in table.iter_mut().zip(vertex.table()) {
            *t += w * v;
        }
    }
    for (t, v) in table.iter_mut().zip(pr_box().table()) {
        *t += weights[16] * v;
    }
    System::new(scenario, table, 1e-9).unwrap()
}

fn identity_bit() -> BitFunction {
    BitFunction::Table(vec![0, 1])
}

#[test]
fn strong_duality_certifies_every_random_system() {
    for trial in 0..20u64 {
        let sys = random_ns_system(child_seed(SEED, trial));
        let mut rng = rng_from_seed(child_seed(SEED, 1000 + trial));
        let inputs = [rng.gen_range(0..2usize), rng.gen_range(0..2usize)];
        let result = distance_from_uniform_lp(&sys, &identity_bit(), &inputs).unwrap();
        assert!(
            (0.0..=0.5 + 1e-9).contains(&result.distance),
            "distance {} out of range on trial {trial}",
            result.distance
        );
        let certified = result.certificate.distance_bound(&result.program).unwrap();
        assert!(
            (result.distance - certified).abs() <= 1e-7,
            "duality gap {} on trial {trial}",
            (result.distance - certified).abs()
        );
    }
}

#[test]
fn witness_partitions_reproduce_every_random_system() {
    for trial in 0..20u64 {
        let sys = random_ns_system(child_seed(SEED, 40 + trial));
        let result = distance_from_uniform_lp(&sys, &identity_bit(), &[0, 0]).unwrap();
        let check = result.witness.validate(&sys, 1e-8).unwrap();
        assert!(
            check.ok,
            "witness invalid on trial {trial}: mixture residual {}, ns residual {}",
            check.mixture_residual, check.ns_residual
        );
    }
}

#[test]
fn local_part_is_at_most_twice_any_distance() {
    let mut systems: Vec<System> = [0.05, 0.1, 0.2]
        .iter()
        .map(|&eps| unbiased_pr_box(eps).unwrap())
        .collect();
    for trial in 0..8u64 {
        systems.push(random_ns_system(child_seed(SEED, 80 + trial)));
    }
    let functions = [
        BitFunction::Table(vec![0, 0]),
        BitFunction::Table(vec![0, 1]),
        BitFunction::Table(vec![1, 0]),
        BitFunction::Table(vec![1, 1]),
    ];
    for (k, sys) in systems.iter().enumerate() {
        let local = local_part(sys, 1 << 10).unwrap().value;
        for f in &functions {
            for u in 0..2usize {
                for v in 0..2usize {
                    let d = distance_from_uniform_lp(sys, f, &[u, v])
                        .unwrap()
                        .distance;
                    assert!(
                        local <= 2.0 * d + 1e-7,
                        "system {k}: local part {local} > 2·{d} at inputs ({u},{v})"
                    );
                }
            }
        }
    }
}

#[test]
fn distance_is_invariant_under_depolarization() {
    for trial in 0..20u64 {
        let sys = random_ns_system(child_seed(SEED, 120 + trial));
        let depolarized = depolarize_expectation(&sys).unwrap();
        let d_raw = distance_from_uniform_lp(&sys, &identity_bit(), &[0, 0])
            .unwrap()
            .distance;
        let d_dep = distance_from_uniform_lp(&depolarized, &identity_bit(), &[0, 0])
            .unwrap()
            .distance;
        assert!(
            (d_raw - d_dep).abs() <= 1e-8,
            "trial {trial}: {d_raw} vs {d_dep}"
        );
    }
}

/// The constraint matrix of two boxes side by side carries exactly the
/// rows of A⊗1 and 1⊗A (as a multiset, hence the same row space).
#[test]
fn joint_constraint_matrix_is_the_tensor_of_the_parts() {
    let single = build_ns_constraint_matrix(&Scenario::bipartite_binary()).unwrap();
    let joint_scenario = Scenario::new(vec![2; 4], vec![2; 4]).unwrap();
    let joint = build_ns_constraint_matrix(&joint_scenario).unwrap();
    assert_eq!(joint.nrows(), 256);
    assert_eq!(joint.ncols(), 256);

    let encode = |row: &[f64]| -> Vec<i8> {
        row.iter()
            .map(|&v| {
                assert!(v == 0.0 || v == 1.0 || v == -1.0, "non-unit entry {v}");
                v as i8
            })
            .collect()
    };
    let mut joint_rows: Vec<Vec<i8>> = (0..joint.nrows()).map(|i| encode(joint.row(i))).collect();

    let mut tensor_rows: Vec<Vec<i8>> = Vec::with_capacity(256);
    for i in 0..single.nrows() {
        for k in 0..16usize {
            // row of A⊗1: the single-box row on box 1, box 2 pinned to cell k
            let mut row = vec![0.0; 256];
            for j in 0..16 {
                row[j * 16 + k] = single[(i, j)];
            }
            tensor_rows.push(encode(&row));
            // row of 1⊗A: box 1 pinned to cell k, the single-box row on box 2
            let mut row = vec![0.0; 256];
            for j in 0..16 {
                row[k * 16 + j] = single[(i, j)];
            }
            tensor_rows.push(encode(&row));
        }
    }
    joint_rows.sort();
    tensor_rows.sort();
    assert_eq!(joint_rows, tensor_rows);
}

#[test]
fn product_certificates_reach_the_closed_form() {
    let eps = 0.1;
    let single = unbiased_pr_box(eps).unwrap();
    let prog = DistanceProgram::new(&single, &identity_bit(), &[0, 0]).unwrap();
    let mut joint = single.clone();
    for n in 1..=4usize {
        if n > 1 {
            joint = tensor(&joint, &single).unwrap();
        }
        let certs = vec![chsh_identity_certificate(); n];
        let bound = xor_bound(&certs, &joint).unwrap();
        let expected = (4.0 * eps).powi(n as i32) / 2.0;
        assert!(
            (bound - expected).abs() <= 1e-10,
            "n={n}: {bound} vs {expected}"
        );
        // replay the product dual explicitly against the factor programs
        let product = tensor_dual(&certs).unwrap();
        let programs: Vec<&DistanceProgram> = (0..n).map(|_| &prog).collect();
        let check = product.verify_explicit(&programs).unwrap();
        assert!(check.feasible, "n={n}: residual {}", check.worst_residual);
        assert!(
            (check.objective_bound - (4.0 * eps).powi(n as i32)).abs() <= 1e-12,
            "n={n}: product bound {}",
            check.objective_bound
        );
    }
}

#[test]
fn xor_bound_multiplies_mixed_factor_distances() {
    let epsilons = [0.05, 0.1, 0.2];
    let boxes: Vec<System> = epsilons
        .iter()
        .map(|&eps| unbiased_pr_box(eps).unwrap())
        .collect();
    let joint = tensor(&tensor(&boxes[0], &boxes[1]).unwrap(), &boxes[2]).unwrap();
    let certs = vec![chsh_identity_certificate(); 3];
    let bound = xor_bound(&certs, &joint).unwrap();

    // identity: the joint bound is 2^{n−1} times the product of the
    // per-system certified distances
    let mut per_system = Vec::new();
    for sys in &boxes {
        let prog = DistanceProgram::new(sys, &identity_bit(), &[0, 0]).unwrap();
        per_system.push(chsh_identity_certificate().distance_bound(&prog).unwrap());
    }
    let product: f64 = per_system.iter().product();
    let expected = 4.0 * product;
    assert!((bound - expected).abs() <= 1e-12, "{bound} vs {expected}");
    let closed_form: f64 = epsilons.iter().map(|&e| 4.0 * e).product::<f64>() / 2.0;
    assert!((bound - closed_form).abs() <= 1e-12);
}

#[test]
fn two_box_system_keeps_local_part_four_eps() {
    let eps = 0.1;
    let single = unbiased_pr_box(eps).unwrap();
    // locality is Alice's side vs Bob's side, each holding both boxes:
    // group the tensor parties [A₁, B₁, A₂, B₂] into composite sides, so
    // a local strategy answers both inputs jointly (4⁴ per side)
    let two = tensor(&single, &single).unwrap();
    let joint = group_parties(&two, &[vec![0, 2], vec![1, 3]]).unwrap();
    let local = local_part(&joint, 1 << 17).unwrap();
    assert!(
        (local.value - 4.0 * eps).abs() <= 1e-6,
        "two-box local part {}",
        local.value
    );
    // the optimal mixture really sits below the joint system
    let scenario = joint.scenario().clone();
    let mut mass = vec![0.0; joint.table().len()];
    for (weight, sys) in local.component_systems(&scenario) {
        for (m, p) in mass.iter_mut().zip(sys.table()) {
            *m += weight * p;
        }
    }
    for (cell, (m, p)) in mass.iter().zip(joint.table()).enumerate() {
        assert!(*m <= p + 1e-8, "cell {cell}: mixture {m} above parent {p}");
    }
}
