//! End-to-end kernel checks: a 48×16 polytope-distance linear program with
//! an independently known optimum and hand-written dual certificate, LP/SDP
//! duality round-trips, and cross-validation of the SDP solver against the
//! eigensolver on a spectral-norm program.

#![allow(clippy::needless_range_loop)]

use nlst_optkernel::{
    eig_symmetric, jacobi_eigendecomposition, lp_solve, sdp_solve, verify_dual_feasible,
    verify_dual_feasible_sdp, Bound, Direction, DualCheck, LPSolution, LinearProgram, LpStatus,
    Mat, SDProblem, SdpExpr, SdpStatus, Sense, SymmetricMatrix,
};

/// Cell layout for two binary-input binary-output boxes: idx = 8u+4x+2v+y.
fn flat(u: usize, x: usize, v: usize, y: usize) -> usize {
    8 * u + 4 * x + 2 * v + y
}

/// Nonsignaling coefficient rows for that layout: four rows varying the
/// second box's input against each (u, x) context, then four varying the
/// first box's input against each (v, y) context.
fn ns_rows() -> Vec<[f64; 16]> {
    let mut rows = Vec::with_capacity(8);
    for u in 0..2 {
        for x in 0..2 {
            let mut row = [0.0; 16];
            for y in 0..2 {
                row[flat(u, x, 0, y)] += 1.0;
                row[flat(u, x, 1, y)] -= 1.0;
            }
            rows.push(row);
        }
    }
    for v in 0..2 {
        for y in 0..2 {
            let mut row = [0.0; 16];
            for x in 0..2 {
                row[flat(0, x, v, y)] += 1.0;
                row[flat(1, x, v, y)] -= 1.0;
            }
            rows.push(row);
        }
    }
    rows
}

/// Correlated box with winning weight (1−eps)/2 on x⊕y = u·v.
fn eps_box(eps: f64) -> [f64; 16] {
    let mut p = [0.0; 16];
    for u in 0..2 {
        for x in 0..2 {
            for v in 0..2 {
                for y in 0..2 {
                    p[flat(u, x, v, y)] = if x ^ y == u & v { (1.0 - eps) / 2.0 } else { eps / 2.0 };
                }
            }
        }
    }
    p
}

/// Distance program: maximize bᵀΔ over free Δ with ±(ns rows)·Δ ≤ 0 and
/// ±Δ ≤ P, where b reads off the bias of the first box's output at fixed
/// inputs (0,0): +1 on cells x = 0, −1 on cells x = 1.
fn distance_lp(eps: f64) -> LinearProgram {
    let ns = ns_rows();
    let p = eps_box(eps);
    let mut rows = Vec::with_capacity(48);
    let mut rhs = Vec::with_capacity(48);
    for r in &ns {
        rows.push(r.to_vec());
        rhs.push(0.0);
    }
    for r in &ns {
        rows.push(r.iter().map(|v| -v).collect());
        rhs.push(0.0);
    }
    for j in 0..16 {
        let mut row = vec![0.0; 16];
        row[j] = 1.0;
        rows.push(row);
        rhs.push(p[j]);
    }
    for j in 0..16 {
        let mut row = vec![0.0; 16];
        row[j] = -1.0;
        rows.push(row);
        rhs.push(p[j]);
    }
    let mut objective = vec![0.0; 16];
    objective[flat(0, 0, 0, 0)] = 1.0;
    objective[flat(0, 0, 0, 1)] = 1.0;
    objective[flat(0, 1, 0, 0)] = -1.0;
    objective[flat(0, 1, 0, 1)] = -1.0;
    LinearProgram {
        objective,
        rows: Mat::from_rows(&rows).expect("fixture rows"),
        rhs,
        senses: vec![Sense::Le; 48],
        bounds: vec![Bound::Free; 16],
        direction: Direction::Max,
    }
}

/// Hand-derived optimal dual for the distance program (independent of the
/// solver): half-weights on alternating nonsignaling rows plus unit
/// weights on the eight losing cells, split across the two bound fans.
fn distance_dual() -> Vec<f64> {
    let mut lam = vec![0.0; 48];
    for k in 0..4 {
        lam[2 * k] = 0.5; // +ns rows 0, 2, 4, 6
        lam[8 + 2 * k + 1] = 0.5; // −ns rows 1, 3, 5, 7
    }
    for cell in [1usize, 3, 10, 12] {
        lam[16 + cell] = 1.0; // upper bound rows Δ ≤ P
    }
    for cell in [4usize, 6, 9, 15] {
        lam[32 + cell] = 1.0; // lower bound rows −Δ ≤ P
    }
    lam
}

#[test]
fn distance_lp_reaches_known_optimum() {
    for &eps in &[0.05, 0.1, 0.2] {
        let lp = distance_lp(eps);
        let sol: LPSolution = lp_solve(&lp, 1e-9).expect("solve");
        assert_eq!(sol.status, LpStatus::Optimal, "eps {eps}");
        assert!(
            (sol.value - 4.0 * eps).abs() < 1e-8,
            "eps {eps}: value {} expected {}",
            sol.value,
            4.0 * eps
        );
    }
}

#[test]
fn solver_duals_certify_the_optimum() {
    let lp = distance_lp(0.1);
    let sol = lp_solve(&lp, 1e-9).expect("solve");
    let check: DualCheck = verify_dual_feasible(&lp, &sol.duals, 1e-7).expect("check");
    assert!(check.feasible, "solver dual infeasible: {}", check.worst_residual);
    assert!((check.bound - sol.value).abs() < 1e-7, "strong duality gap");
}

#[test]
fn handwritten_dual_is_feasible_with_matching_bound() {
    let eps = 0.1;
    let lp = distance_lp(eps);
    let lam = distance_dual();
    let check = verify_dual_feasible(&lp, &lam, 1e-12).expect("check");
    assert!(check.feasible, "residual {}", check.worst_residual);
    assert!((check.bound - 4.0 * eps).abs() < 1e-12, "bound {}", check.bound);

    // and it matches the solver's optimum exactly (strong duality)
    let sol = lp_solve(&lp, 1e-9).expect("solve");
    assert!((sol.value - check.bound).abs() < 1e-8);
}

#[test]
fn corrupting_the_dual_breaks_feasibility() {
    let lp = distance_lp(0.1);
    let mut lam = distance_dual();
    lam[16 + 1] = 0.0; // drop one bound row's weight
    let check = verify_dual_feasible(&lp, &lam, 1e-9).expect("check");
    assert!(!check.feasible);
}

#[test]
fn sdp_spectral_norm_agrees_with_eigensolver() {
    // min t s.t. t·I − A ⪰ 0 against a direct eigendecomposition
    let a_rows = [
        [2.0, -1.0, 0.3],
        [-1.0, 1.5, 0.7],
        [0.3, 0.7, -0.5],
    ];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let mut r = SdpExpr::new();
            r.push_entry(0, i, j);
            r.push_free(0, -f64::from(u8::from(i == j)));
            rows.push(r);
            rhs.push(-a_rows[i][j]);
        }
    }
    let mut obj = SdpExpr::new();
    obj.push_free(0, 1.0);
    let p = SDProblem {
        block_dims: vec![3],
        nfree: 1,
        rows,
        rhs,
        objective: obj,
        direction: Direction::Min,
    };
    let sol = sdp_solve(&p, 1e-9).expect("solve");
    assert_eq!(sol.status, SdpStatus::Optimal);

    let mut sym = SymmetricMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..=i {
            sym.set(i, j, a_rows[i][j]);
        }
    }
    let evals = eig_symmetric(&sym, 1e-13).expect("eig");
    let lam_max = evals[2];
    assert!(
        (sol.value - lam_max).abs() < 1e-6,
        "sdp {} vs eig {}",
        sol.value,
        lam_max
    );

    let check = verify_dual_feasible_sdp(&p, &sol.duals, 1e-6).expect("check");
    assert!(check.feasible, "residual {}", check.worst_residual);
    assert!((check.bound - sol.value).abs() < 1e-5);
}

#[test]
fn sdp_bound_sandwiches_the_primal_value() {
    // max ⟨C, X⟩ with tr X = 1: the verified dual bound must sit above the
    // primal value; at optimality they coincide with λ_max(C).
    let c_rows = [[1.0, 0.4], [0.4, 0.2]];
    let mut row = SdpExpr::new();
    row.push_entry(0, 0, 0);
    row.push_entry(0, 1, 1);
    let mut obj = SdpExpr::new();
    for i in 0..2 {
        for j in i..2 {
            obj.push_matrix_entry(0, i, j, c_rows[i][j]);
        }
    }
    let p = SDProblem {
        block_dims: vec![2],
        nfree: 0,
        rows: vec![row],
        rhs: vec![1.0],
        objective: obj,
        direction: Direction::Max,
    };
    let sol = sdp_solve(&p, 1e-9).expect("solve");
    assert_eq!(sol.status, SdpStatus::Optimal);
    let check = verify_dual_feasible_sdp(&p, &sol.duals, 1e-6).expect("check");
    assert!(check.feasible);
    assert!(sol.value <= check.bound + 1e-7);

    let mut sym = SymmetricMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..=i {
            sym.set(i, j, c_rows[i][j]);
        }
    }
    let lam_max = eig_symmetric(&sym, 1e-13).expect("eig")[1];
    assert!((sol.value - lam_max).abs() < 1e-6);
}

#[test]
fn eigendecomposition_reconstructs_and_orthonormalizes() {
    let dense = Mat::from_rows(&[
        vec![4.0, 1.0, -2.0, 0.5],
        vec![1.0, 3.0, 0.0, 1.5],
        vec![-2.0, 0.0, 1.0, -1.0],
        vec![0.5, 1.5, -1.0, 2.0],
    ])
    .expect("dense");
    let (evals, vecs) = jacobi_eigendecomposition(&dense, 1e-13).expect("eig");
    // reconstruction V Λ Vᵀ = A
    let mut lam = Mat::zeros(4, 4);
    for i in 0..4 {
        lam[(i, i)] = evals[i];
    }
    let rebuilt = vecs.matmul(&lam).matmul(&vecs.transpose());
    let mut diff = rebuilt.clone();
    diff.scaled_add(-1.0, &dense);
    assert!(diff.max_abs() < 1e-10, "reconstruction error {}", diff.max_abs());
    // orthonormal columns
    let gram = vecs.transpose().matmul(&vecs);
    let mut eye_diff = gram.clone();
    eye_diff.scaled_add(-1.0, &Mat::identity(4));
    assert!(eye_diff.max_abs() < 1e-12);
    // ascending order
    for w in evals.windows(2) {
        assert!(w[0] <= w[1] + 1e-14);
    }
}
