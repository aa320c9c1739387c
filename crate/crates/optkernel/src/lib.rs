//! Self-contained dense optimization kernel: a two-phase revised simplex
//! solver for linear programs, a cyclic Jacobi eigensolver for symmetric
//! matrices, and a primal-dual interior-point solver for small
//! block-diagonal semidefinite programs. Every solver returns duals and
//! ships with an independent feasibility checker so callers can certify
//! bounds rather than trust solver output.
//!
//! The kernel has no dependencies beyond error derivation and works on
//! plain `Vec<f64>`-backed matrices; it is sized for the dense, small-to-
//! medium programs that arise from nonsignaling polytopes and moment
//! relaxations (hundreds of rows, blocks of dimension tens).

// Index loops over several arrays in lockstep read better than zipped
// iterators in dense linear-algebra code.
#![allow(clippy::needless_range_loop)]

pub mod eigen;
pub mod error;
pub mod lp;
pub mod mat;
pub mod sdp;
pub mod simplex;

pub use eigen::{
    eig_symmetric, jacobi_eigendecomposition, min_eigenvalue, symmetric_function,
    SymmetricMatrix,
};
pub use error::KernelError;
pub use lp::{
    lp_solve, verify_dual_feasible, Bound, Direction, DualCheck, LPSolution, LinearProgram,
    LpStatus, Sense,
};
pub use mat::{lu_factor, Lu, Mat};
pub use sdp::{
    adjoint_apply, dual_slack, sdp_solve, verify_dual_feasible_sdp, SDProblem, SdpExpr,
    SdpSolution, SdpStatus, SdpTerm, SDP_FEAS_TOL,
};
pub use simplex::{
    solve_standard, solve_with_column_generation, ColumnSource, DenseColumns, StandardSolution,
    StandardStatus,
};
