//! Public linear-program interface over the standard-form simplex core.
//!
//! The problem is stated as  max/min objᵀx  s.t.  A·x ⋚ rhs  with per-row
//! senses (≤, =) and per-variable bounds (free, ≥ 0). Internally this is
//! reduced to min cᵀx̃, Ã·x̃ = b̃ ≥ 0, x̃ ≥ 0 by slack columns, free-variable
//! splits, row-sign flips, and objective negation (for max).
//!
//! Dual convention (what [`verify_dual_feasible`] checks and `duals`
//! satisfies): the certified bound is rhsᵀλ, and
//! * direction Max:  λ ≥ 0 on ≤-rows, free on =-rows; (Aᵀλ)_j ≥ obj_j for
//!   x_j ≥ 0, with equality for free x_j;
//! * direction Min:  λ ≤ 0 on ≤-rows, free on =-rows; (Aᵀλ)_j ≤ obj_j for
//!   x_j ≥ 0, with equality for free x_j.

use crate::error::KernelError;
use crate::mat::Mat;
use crate::simplex::{solve_standard, ColumnSource, StandardStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Free,
    NonNeg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Max,
    Min,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Mat,
    pub rhs: Vec<f64>,
    pub senses: Vec<Sense>,
    pub bounds: Vec<Bound>,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LPSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
    /// Row duals in the convention documented at module level.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

/// Result of checking a dual vector against a program.
#[derive(Debug, Clone, Copy)]
pub struct DualCheck {
    pub feasible: bool,
    pub worst_residual: f64,
    /// rhsᵀλ — an upper (Max) or lower (Min) bound on the optimum when
    /// feasible, by weak duality.
    pub bound: f64,
}

impl LinearProgram {
    pub fn validate(&self) -> Result<(), KernelError> {
        let m = self.rows.nrows();
        let n = self.rows.ncols();
        if m == 0 {
            return Err(KernelError::Dimension("program needs at least one row".into()));
        }
        if self.objective.len() != n
            || self.rhs.len() != m
            || self.senses.len() != m
            || self.bounds.len() != n
        {
            return Err(KernelError::Dimension(format!(
                "inconsistent dimensions: A is {m}×{n}, obj {}, rhs {}, senses {}, bounds {}",
                self.objective.len(),
                self.rhs.len(),
                self.senses.len(),
                self.bounds.len()
            )));
        }
        if let Some(i) = self.objective.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NonFinite { what: "objective", index: i });
        }
        if let Some(i) = self.rhs.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NonFinite { what: "rhs", index: i });
        }
        if !self.rows.is_finite() {
            return Err(KernelError::NonFinite { what: "matrix", index: 0 });
        }
        Ok(())
    }
}

/// Internal standard-form view: original variables become one or two
/// columns (free splits), ≤-rows gain a slack column, rows with negative
/// rhs are sign-flipped.
struct Standardized<'a> {
    lp: &'a LinearProgram,
    /// per original variable: (positive column index, optional negative)
    var_cols: Vec<(usize, Option<usize>)>,
    /// per column: (original var, +1/−1) or slack row
    col_kind: Vec<ColKind>,
    row_sign: Vec<f64>,
    rhs: Vec<f64>,
    ncols: usize,
    obj_sign: f64,
}

#[derive(Clone, Copy)]
enum ColKind {
    Var(usize, f64),
    Slack(usize),
}

impl<'a> Standardized<'a> {
    fn build(lp: &'a LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.bounds.len());
        let mut col_kind = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            let pos = col_kind.len();
            col_kind.push(ColKind::Var(j, 1.0));
            let neg = match b {
                Bound::NonNeg => None,
                Bound::Free => {
                    col_kind.push(ColKind::Var(j, -1.0));
                    Some(pos + 1)
                }
            };
            var_cols.push((pos, neg));
        }
        for (i, s) in lp.senses.iter().enumerate() {
            if matches!(s, Sense::Le) {
                col_kind.push(ColKind::Slack(i));
            }
        }
        let row_sign: Vec<f64> = lp
            .rhs
            .iter()
            .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let rhs: Vec<f64> = lp.rhs.iter().zip(&row_sign).map(|(b, s)| b * s).collect();
        let obj_sign = match lp.direction {
            Direction::Max => -1.0,
            Direction::Min => 1.0,
        };
        let ncols = col_kind.len();
        Standardized {
            lp,
            var_cols,
            col_kind,
            row_sign,
            rhs,
            ncols,
            obj_sign,
        }
    }
}

impl ColumnSource for Standardized<'_> {
    fn nrows(&self) -> usize {
        self.lp.rows.nrows()
    }
    fn ncols(&self) -> usize {
        self.ncols
    }
    fn cost(&self, j: usize) -> f64 {
        match self.col_kind[j] {
            ColKind::Var(v, sign) => self.obj_sign * sign * self.lp.objective[v],
            ColKind::Slack(_) => 0.0,
        }
    }
    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        match self.col_kind[j] {
            ColKind::Var(v, sign) => {
                for i in 0..self.lp.rows.nrows() {
                    let a = self.lp.rows[(i, v)];
                    if a != 0.0 {
                        out.push((i, sign * self.row_sign[i] * a));
                    }
                }
            }
            ColKind::Slack(i) => out.push((i, self.row_sign[i])),
        }
    }
}

/// Solve a general dense linear program. On `Optimal` the returned primal
/// and dual satisfy strong duality within tol (asserted by the callers'
/// tests rather than hidden post-processing).
pub fn lp_solve(lp: &LinearProgram, tol: f64) -> Result<LPSolution, KernelError> {
    lp.validate()?;
    let std = Standardized::build(lp);
    let raw = solve_standard(&std, &std.rhs, tol)?;

    let status = match raw.status {
        StandardStatus::Optimal => LpStatus::Optimal,
        StandardStatus::Infeasible => LpStatus::Infeasible,
        StandardStatus::Unbounded => LpStatus::Unbounded,
    };
    let n = lp.objective.len();
    let mut x = vec![0.0; n];
    if status == LpStatus::Optimal {
        for (v, &(pos, neg)) in std.var_cols.iter().enumerate() {
            x[v] = raw.x[pos] - neg.map_or(0.0, |c| raw.x[c]);
        }
    }
    let value = match status {
        LpStatus::Optimal => {
            x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum::<f64>()
        }
        LpStatus::Unbounded => match lp.direction {
            Direction::Max => f64::INFINITY,
            Direction::Min => f64::NEG_INFINITY,
        },
        LpStatus::Infeasible => f64::NAN,
    };
    // external duals: λ_i = obj_sign · row_sign_i · y_i (bound = rhsᵀλ)
    let duals: Vec<f64> = raw
        .duals
        .iter()
        .zip(&std.row_sign)
        .map(|(y, s)| std.obj_sign * s * y)
        .collect();
    Ok(LPSolution {
        status,
        x,
        value,
        duals,
        iterations: raw.iterations,
    })
}

/// Weak-duality check of a supplied dual vector against the program, in
/// the module-level sign convention. Feasibility of λ certifies
/// `bound = rhsᵀλ` as an upper (Max) or lower (Min) bound on the optimum.
pub fn verify_dual_feasible(
    lp: &LinearProgram,
    lambda: &[f64],
    tol: f64,
) -> Result<DualCheck, KernelError> {
    lp.validate()?;
    if lambda.len() != lp.rows.nrows() {
        return Err(KernelError::Dimension(format!(
            "dual has {} entries for {} rows",
            lambda.len(),
            lp.rows.nrows()
        )));
    }
    let max_dir = matches!(lp.direction, Direction::Max);
    let mut worst = 0.0f64;
    for (i, s) in lp.senses.iter().enumerate() {
        if matches!(s, Sense::Le) {
            // λ ≥ 0 for Max, ≤ 0 for Min
            let viol = if max_dir { -lambda[i] } else { lambda[i] };
            worst = worst.max(viol);
        }
    }
    let at_lambda = lp.rows.tr_matvec(lambda);
    for (j, b) in lp.bounds.iter().enumerate() {
        let r = at_lambda[j] - lp.objective[j];
        let viol = match b {
            // (Aᵀλ)_j ≥ obj_j for Max, ≤ for Min
            Bound::NonNeg => {
                if max_dir {
                    -r
                } else {
                    r
                }
            }
            Bound::Free => r.abs(),
        };
        worst = worst.max(viol);
    }
    let bound = lambda.iter().zip(&lp.rhs).map(|(l, b)| l * b).sum();
    Ok(DualCheck {
        feasible: worst <= tol,
        worst_residual: worst,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_lp() -> LinearProgram {
        // max x1 + x2 s.t. x1 ≤ 1, x2 ≤ 1, x ≥ 0
        LinearProgram {
            objective: vec![1.0, 1.0],
            rows: Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            rhs: vec![1.0, 1.0],
            senses: vec![Sense::Le, Sense::Le],
            bounds: vec![Bound::NonNeg, Bound::NonNeg],
            direction: Direction::Max,
        }
    }

    #[test]
    fn box_maximum_with_strong_duality() {
        let lp = box_lp();
        let sol = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 2.0).abs() < 1e-9);
        let check = verify_dual_feasible(&lp, &sol.duals, 1e-7).unwrap();
        assert!(check.feasible, "residual {}", check.worst_residual);
        assert!((check.bound - sol.value).abs() < 1e-8);
    }

    #[test]
    fn infeasible_pair_detected() {
        // x ≤ 1 and −x ≤ −2
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: Mat::from_rows(&[vec![1.0], vec![-1.0]]).unwrap(),
            rhs: vec![1.0, -2.0],
            senses: vec![Sense::Le, Sense::Le],
            bounds: vec![Bound::NonNeg],
            direction: Direction::Max,
        };
        let sol = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_equality_rows() {
        // max y s.t. y = x − 3, x ≤ 5  (both free ≥ split paths exercised)
        // rows: y − x = −3; x ≤ 5 → optimum y = 2
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            rows: Mat::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap(),
            rhs: vec![-3.0, 5.0],
            senses: vec![Sense::Eq, Sense::Le],
            bounds: vec![Bound::Free, Bound::Free],
            direction: Direction::Max,
        };
        let sol = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 2.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.x[1] - 5.0).abs() < 1e-9);
        let check = verify_dual_feasible(&lp, &sol.duals, 1e-7).unwrap();
        assert!(check.feasible);
        assert!((check.bound - 2.0).abs() < 1e-8);
    }

    #[test]
    fn minimization_duals_have_flipped_signs() {
        // min x1 + 2x2 s.t. −x1 − x2 ≤ −4, x ≥ 0 → x = (4,0), value 4
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            rows: Mat::from_rows(&[vec![-1.0, -1.0]]).unwrap(),
            rhs: vec![-4.0],
            senses: vec![Sense::Le],
            bounds: vec![Bound::NonNeg, Bound::NonNeg],
            direction: Direction::Min,
        };
        let sol = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - 4.0).abs() < 1e-9);
        let check = verify_dual_feasible(&lp, &sol.duals, 1e-7).unwrap();
        assert!(check.feasible, "residual {}", check.worst_residual);
        assert!((check.bound - 4.0).abs() < 1e-8);
        assert!(sol.duals[0] <= 1e-12); // ≤-row under Min carries λ ≤ 0
    }

    #[test]
    fn zero_dual_against_nonzero_objective_is_rejected() {
        let lp = box_lp();
        let check = verify_dual_feasible(&lp, &[0.0, 0.0], 1e-9).unwrap();
        assert!(!check.feasible);
        assert!(check.worst_residual >= 1.0 - 1e-12);
    }

    #[test]
    fn unbounded_max_detected() {
        // max x1 s.t. x1 − x2 ≤ 0 (x2 free to chase x1 upward)
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            rows: Mat::from_rows(&[vec![1.0, -1.0]]).unwrap(),
            rhs: vec![0.0],
            senses: vec![Sense::Le],
            bounds: vec![Bound::NonNeg, Bound::NonNeg],
            direction: Direction::Max,
        };
        let sol = lp_solve(&lp, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        assert!(sol.value.is_infinite());
    }
}
