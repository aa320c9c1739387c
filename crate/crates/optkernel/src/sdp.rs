//! Small dense semidefinite programs:
//!   min/max  C•X + dᵀt   s.t.   A_r•X + f_rᵀt = rhs_r,   X ⪰ 0 blockwise,
//! with t a vector of free scalars. Solved by a primal-dual path-following
//! method with Nesterov–Todd scaling and a Mehrotra predictor-corrector
//! step; the Newton system is reduced to a Schur complement augmented with
//! the free-variable columns and solved by LU.
//!
//! Matrices enter as sparse symmetric expressions: a term (block, i, j, c)
//! with i ≠ j sets both mirror entries to c (so it contributes
//! c·(X_ij + X_ji) to the Frobenius product); use
//! [`SdpExpr::push_entry`] for rows that read off a single entry X_ij.
//!
//! Dual convention (mirrors the LP module): the certified bound is rhsᵀy;
//! direction Min has slack S = C − A*(y) ⪰ 0 and bound ≤ optimum,
//! direction Max has slack S = A*(y) − C ⪰ 0 and bound ≥ optimum.

use crate::error::KernelError;
use crate::eigen::{jacobi_eigendecomposition, symmetric_function};
use crate::lp::{Direction, DualCheck};
use crate::mat::{lu_factor, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct SdpTerm {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub coeff: f64,
}

/// A linear functional of (PSD blocks, free scalars).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SdpExpr {
    pub terms: Vec<SdpTerm>,
    pub free: Vec<(usize, f64)>,
}

impl SdpExpr {
    pub fn new() -> Self {
        SdpExpr::default()
    }

    /// Add a raw symmetric coefficient: A[i,j] = A[j,i] = coeff.
    pub fn push_matrix_entry(&mut self, block: usize, i: usize, j: usize, coeff: f64) {
        self.terms.push(SdpTerm { block, i, j, coeff });
    }

    /// Add the functional "the entry X_b[i,j]" (coefficient ½ on mirror
    /// pairs so the symmetric Frobenius product reads one entry).
    pub fn push_entry(&mut self, block: usize, i: usize, j: usize) {
        self.push_entry_scaled(block, i, j, 1.0);
    }

    /// Add scale·X_b[i,j].
    pub fn push_entry_scaled(&mut self, block: usize, i: usize, j: usize, scale: f64) {
        let coeff = if i == j { scale } else { 0.5 * scale };
        self.terms.push(SdpTerm { block, i, j, coeff });
    }

    pub fn push_free(&mut self, k: usize, coeff: f64) {
        self.free.push((k, coeff));
    }

    /// Frobenius action on symmetric blocks plus the free part.
    pub fn value(&self, blocks: &[Mat], free: &[f64]) -> f64 {
        let mut v = 0.0;
        for t in &self.terms {
            let x = &blocks[t.block];
            v += t.coeff
                * if t.i == t.j {
                    x[(t.i, t.i)]
                } else {
                    x[(t.i, t.j)] + x[(t.j, t.i)]
                };
        }
        for &(k, c) in &self.free {
            v += c * free[k];
        }
        v
    }

    /// Scatter coeff·this into dense per-block accumulators.
    fn scatter(&self, scale: f64, into: &mut [Mat]) {
        for t in &self.terms {
            let m = &mut into[t.block];
            m[(t.i, t.j)] += scale * t.coeff;
            if t.i != t.j {
                m[(t.j, t.i)] += scale * t.coeff;
            }
        }
    }

    fn max_abs_coeff(&self) -> f64 {
        let a = self.terms.iter().fold(0.0f64, |m, t| m.max(t.coeff.abs()));
        self.free.iter().fold(a, |m, &(_, c)| m.max(c.abs()))
    }
}

#[derive(Debug, Clone)]
pub struct SDProblem {
    pub block_dims: Vec<usize>,
    pub nfree: usize,
    pub rows: Vec<SdpExpr>,
    pub rhs: Vec<f64>,
    pub objective: SdpExpr,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Objective in the problem's stated direction.
    pub value: f64,
    pub primal_blocks: Vec<Mat>,
    pub free_vars: Vec<f64>,
    /// Row duals (external convention; see module docs).
    pub duals: Vec<f64>,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

pub const SDP_FEAS_TOL: f64 = 1e-7;
const MAX_ITER: usize = 100;

impl SDProblem {
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.rows.len() != self.rhs.len() {
            return Err(KernelError::Dimension(format!(
                "{} rows vs {} rhs entries",
                self.rows.len(),
                self.rhs.len()
            )));
        }
        if self.rows.is_empty() {
            return Err(KernelError::Dimension("program needs at least one row".into()));
        }
        let check_expr = |e: &SdpExpr| -> Result<(), KernelError> {
            for t in &e.terms {
                if t.block >= self.block_dims.len()
                    || t.i >= self.block_dims[t.block]
                    || t.j >= self.block_dims[t.block]
                {
                    return Err(KernelError::Dimension(format!(
                        "term ({}, {}, {}) outside block structure",
                        t.block, t.i, t.j
                    )));
                }
                if !t.coeff.is_finite() {
                    return Err(KernelError::NonFinite { what: "sdp coefficient", index: 0 });
                }
            }
            for &(k, c) in &e.free {
                if k >= self.nfree {
                    return Err(KernelError::Dimension(format!(
                        "free index {k} with only {} free vars",
                        self.nfree
                    )));
                }
                if !c.is_finite() {
                    return Err(KernelError::NonFinite { what: "free coefficient", index: k });
                }
            }
            Ok(())
        };
        for r in &self.rows {
            check_expr(r)?;
        }
        check_expr(&self.objective)?;
        if let Some(i) = self.rhs.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NonFinite { what: "rhs", index: i });
        }
        Ok(())
    }

    fn internal_sign(&self) -> f64 {
        match self.direction {
            Direction::Min => 1.0,
            Direction::Max => -1.0,
        }
    }
}

/// A*(y) = Σ_r y_r·A_r as dense blocks (the adjoint of the constraint map,
/// restricted to the PSD part).
pub fn adjoint_apply(p: &SDProblem, y: &[f64]) -> Vec<Mat> {
    let mut out: Vec<Mat> = p.block_dims.iter().map(|&d| Mat::zeros(d, d)).collect();
    for (r, row) in p.rows.iter().enumerate() {
        if y[r] != 0.0 {
            row.scatter(y[r], &mut out);
        }
    }
    out
}

/// Dual slack blocks for a supplied dual vector, oriented so that
/// feasibility means every block ⪰ 0 (direction-aware; see module docs).
pub fn dual_slack(p: &SDProblem, y: &[f64]) -> Vec<Mat> {
    let sign = p.internal_sign();
    let mut slack: Vec<Mat> = p.block_dims.iter().map(|&d| Mat::zeros(d, d)).collect();
    p.objective.scatter(sign, &mut slack);
    for (r, row) in p.rows.iter().enumerate() {
        if y[r] != 0.0 {
            row.scatter(-sign * y[r], &mut slack);
        }
    }
    slack
}

/// Weak-duality check of a dual vector: free-variable stationarity rows
/// must balance and every slack block must be PSD within tol. Certifies
/// `bound = rhsᵀy` (lower bound for Min, upper for Max).
pub fn verify_dual_feasible_sdp(
    p: &SDProblem,
    y: &[f64],
    tol: f64,
) -> Result<DualCheck, KernelError> {
    p.validate()?;
    if y.len() != p.rows.len() {
        return Err(KernelError::Dimension(format!(
            "dual has {} entries for {} rows",
            y.len(),
            p.rows.len()
        )));
    }
    let sign = p.internal_sign();
    let mut worst = 0.0f64;

    // stationarity in the free variables: Σ_r y_r f_r = d
    let mut fty = vec![0.0; p.nfree];
    for (r, row) in p.rows.iter().enumerate() {
        for &(k, c) in &row.free {
            fty[k] += sign * y[r] * c;
        }
    }
    let mut d = vec![0.0; p.nfree];
    for &(k, c) in &p.objective.free {
        d[k] += sign * c;
    }
    for (a, b) in fty.iter().zip(&d) {
        worst = worst.max((a - b).abs());
    }

    for block in dual_slack(p, y) {
        let (evals, _) = jacobi_eigendecomposition(&block, 1e-13)?;
        worst = worst.max(-evals[0]);
    }

    let bound = y.iter().zip(&p.rhs).map(|(a, b)| a * b).sum();
    Ok(DualCheck {
        feasible: worst <= tol,
        worst_residual: worst,
        bound,
    })
}

/// Per-block scaling data derived from the current (X, S) iterate.
struct BlockScaling {
    w: Mat,
    s_inv: Mat,
}

fn nt_scaling(x: &Mat, s: &Mat) -> Result<BlockScaling, KernelError> {
    const FLOOR: f64 = 1e-13;
    let s_half = symmetric_function(s, FLOOR, f64::sqrt)?;
    let s_inv_half = symmetric_function(s, FLOOR, |v| 1.0 / v.sqrt())?;
    let s_inv = symmetric_function(s, FLOOR, |v| 1.0 / v)?;
    let mid = s_half.matmul(x).matmul(&s_half);
    let mid_half = symmetric_function(&mid, FLOOR, f64::sqrt)?;
    let mut w = s_inv_half.matmul(&mid_half).matmul(&s_inv_half);
    w.symmetrize();
    Ok(BlockScaling { w, s_inv })
}

/// Largest α ∈ (0, 1] with X + α·ΔX ⪰ 0.
fn max_step(x: &Mat, dx: &Mat) -> Result<f64, KernelError> {
    let x_inv_half = symmetric_function(x, 1e-13, |v| 1.0 / v.sqrt())?;
    let mut m = x_inv_half.matmul(dx).matmul(&x_inv_half);
    m.symmetrize();
    let (evals, _) = jacobi_eigendecomposition(&m, 1e-11)?;
    let lam_min = evals[0];
    if lam_min >= -1e-13 {
        Ok(1.0)
    } else {
        Ok((-1.0 / lam_min).min(1.0))
    }
}

struct Iterate {
    x: Vec<Mat>,
    s: Vec<Mat>,
    y: Vec<f64>,
    t: Vec<f64>,
}

struct KktStep {
    dy: Vec<f64>,
    dt: Vec<f64>,
    ds: Vec<Mat>,
    dx: Vec<Mat>,
}

/// Solve the program. `gap_tol` bounds the relative duality gap at the
/// solution; feasibility residuals are held to [`SDP_FEAS_TOL`]. Returns
/// best-effort iterates with a diagnostic status instead of failing when
/// the iteration cap or a numerical breakdown is hit.
pub fn sdp_solve(p: &SDProblem, gap_tol: f64) -> Result<SdpSolution, KernelError> {
    p.validate()?;
    let sign = p.internal_sign();
    let m = p.rows.len();
    let nf = p.nfree;
    let dims = p.block_dims.clone();
    let nb = dims.len();
    let ntot: usize = dims.iter().sum();

    // internal (minimization) objective as dense blocks + free vector
    let mut c_blocks: Vec<Mat> = dims.iter().map(|&d| Mat::zeros(d, d)).collect();
    p.objective.scatter(sign, &mut c_blocks);
    let mut d_free = vec![0.0; nf];
    for &(k, c) in &p.objective.free {
        d_free[k] += sign * c;
    }

    // dense free-column matrix F (m × nf)
    let mut f_cols = Mat::zeros(m, nf.max(1));
    for (r, row) in p.rows.iter().enumerate() {
        for &(k, c) in &row.free {
            f_cols[(r, k)] += c;
        }
    }

    let rhs_scale = 1.0 + p.rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let obj_scale = 1.0 + p.objective.max_abs_coeff();

    let mut it = Iterate {
        x: dims.iter().map(|&d| {
            let mut i = Mat::identity(d);
            i.scale(rhs_scale);
            i
        }).collect(),
        s: dims.iter().map(|&d| {
            let mut i = Mat::identity(d);
            i.scale(obj_scale);
            i
        }).collect(),
        y: vec![0.0; m],
        t: vec![0.0; nf],
    };

    let primal_value = |st: &Iterate| -> f64 {
        let mut v = 0.0;
        for b in 0..nb {
            v += c_blocks[b].dot(&st.x[b]);
        }
        v + d_free.iter().zip(&st.t).map(|(a, b)| a * b).sum::<f64>()
    };
    let row_value = |row: &SdpExpr, st: &Iterate| row.value(&st.x, &st.t);

    let mut best = SdpSolution {
        status: SdpStatus::MaxIterations,
        value: f64::NAN,
        primal_blocks: it.x.clone(),
        free_vars: it.t.clone(),
        duals: it.y.clone(),
        gap: f64::INFINITY,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: 0,
    };

    let finish = |status: SdpStatus, st: &Iterate, gap: f64, rp: f64, rd: f64, iters: usize| {
        SdpSolution {
            status,
            value: sign * primal_value(st),
            primal_blocks: st.x.clone(),
            free_vars: st.t.clone(),
            duals: st.y.iter().map(|&v| sign * v).collect(),
            gap,
            primal_residual: rp,
            dual_residual: rd,
            iterations: iters,
        }
    };

    for iter in 0..MAX_ITER {
        // residuals
        let mut rp = vec![0.0; m];
        for r in 0..m {
            rp[r] = p.rhs[r] - row_value(&p.rows[r], &it);
        }
        let mut rd: Vec<Mat> = (0..nb).map(|b| {
            let mut z = c_blocks[b].clone();
            z.scaled_add(-1.0, &it.s[b]);
            z
        }).collect();
        for (r, row) in p.rows.iter().enumerate() {
            if it.y[r] != 0.0 {
                row.scatter(-it.y[r], &mut rd);
            }
        }
        let mut rf = d_free.clone();
        for r in 0..m {
            if it.y[r] != 0.0 {
                for k in 0..nf {
                    rf[k] -= f_cols[(r, k)] * it.y[r];
                }
            }
        }

        let mu: f64 = (0..nb).map(|b| it.x[b].dot(&it.s[b])).sum::<f64>() / ntot as f64;
        let pobj = primal_value(&it);
        let dobj: f64 = it.y.iter().zip(&p.rhs).map(|(a, b)| a * b).sum();
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let rp_norm = rp.iter().fold(0.0f64, |a, &b| a.max(b.abs())) / rhs_scale;
        let rd_norm = rd.iter().map(Mat::max_abs).fold(0.0f64, f64::max) / obj_scale;
        let rf_norm = rf.iter().fold(0.0f64, |a, &b| a.max(b.abs())) / obj_scale;

        if gap < best.gap {
            best = finish(SdpStatus::MaxIterations, &it, gap, rp_norm.max(rf_norm), rd_norm, iter);
        }
        if rp_norm <= SDP_FEAS_TOL && rd_norm <= SDP_FEAS_TOL && rf_norm <= SDP_FEAS_TOL
            && gap <= gap_tol
        {
            return Ok(finish(SdpStatus::Optimal, &it, gap, rp_norm.max(rf_norm), rd_norm, iter));
        }

        // NT scaling and Schur complement
        let scal: Vec<BlockScaling> = match (0..nb)
            .map(|b| nt_scaling(&it.x[b], &it.s[b]))
            .collect::<Result<_, _>>()
        {
            Ok(s) => s,
            Err(_) => return Ok(best_with_status(best, SdpStatus::NumericalFailure)),
        };

        // T_s = W·A_s·W per block, dense per row
        let mut t_rows: Vec<Vec<Mat>> = Vec::with_capacity(m);
        for row in &p.rows {
            let mut dense: Vec<Mat> = dims.iter().map(|&d| Mat::zeros(d, d)).collect();
            row.scatter(1.0, &mut dense);
            let mut t_bs = Vec::with_capacity(nb);
            for b in 0..nb {
                let mut t = scal[b].w.matmul(&dense[b]).matmul(&scal[b].w);
                t.symmetrize();
                t_bs.push(t);
            }
            t_rows.push(t_bs);
        }
        let kdim = m + nf;
        let mut kmat = Mat::zeros(kdim, kdim);
        for r in 0..m {
            for s in 0..m {
                kmat[(r, s)] = p.rows[r].terms.iter().map(|t| {
                    let ts = &t_rows[s][t.block];
                    t.coeff * if t.i == t.j {
                        ts[(t.i, t.i)]
                    } else {
                        ts[(t.i, t.j)] + ts[(t.j, t.i)]
                    }
                }).sum();
            }
        }
        for r in 0..m {
            for k in 0..nf {
                kmat[(r, m + k)] = f_cols[(r, k)];
                kmat[(m + k, r)] = f_cols[(r, k)];
            }
        }
        let klu = match lu_factor(&kmat, "sdp schur system") {
            Ok(l) => l,
            Err(_) => return Ok(best_with_status(best, SdpStatus::NumericalFailure)),
        };

        let w_rd_w: Vec<Mat> = (0..nb).map(|b| {
            let mut z = scal[b].w.matmul(&rd[b]).matmul(&scal[b].w);
            z.symmetrize();
            z
        }).collect();

        // shared KKT solve for a given complementarity target R
        let solve_kkt = |rcomp: &[Mat]| -> Result<KktStep, KernelError> {
            // eff = R − W·Rd·W feeds the reduced-system right side as −A(eff)
            let eff: Vec<Mat> = (0..nb).map(|b| {
                let mut e = rcomp[b].clone();
                e.scaled_add(-1.0, &w_rd_w[b]);
                e
            }).collect();
            let mut krhs = vec![0.0; kdim];
            for r in 0..m {
                let mut v = rp[r];
                v -= p.rows[r].terms.iter().map(|t| {
                    let e = &eff[t.block];
                    t.coeff * if t.i == t.j {
                        e[(t.i, t.i)]
                    } else {
                        e[(t.i, t.j)] + e[(t.j, t.i)]
                    }
                }).sum::<f64>();
                krhs[r] = v;
            }
            krhs[m..kdim].copy_from_slice(&rf[..nf]);
            let sol = klu.solve(&krhs);
            let dy = sol[..m].to_vec();
            let dt = sol[m..].to_vec();
            let mut ds: Vec<Mat> = (0..nb).map(|b| rd[b].clone()).collect();
            for (r, row) in p.rows.iter().enumerate() {
                if dy[r] != 0.0 {
                    row.scatter(-dy[r], &mut ds);
                }
            }
            let mut dx = Vec::with_capacity(nb);
            for b in 0..nb {
                let mut w_ds_w = scal[b].w.matmul(&ds[b]).matmul(&scal[b].w);
                w_ds_w.symmetrize();
                let mut d = rcomp[b].clone();
                d.scaled_add(-1.0, &w_ds_w);
                d.symmetrize();
                dx.push(d);
            }
            Ok(KktStep { dy, dt, ds, dx })
        };

        // predictor (affine): R = −X
        let r_aff: Vec<Mat> = (0..nb).map(|b| {
            let mut r = it.x[b].clone();
            r.scale(-1.0);
            r
        }).collect();
        let Ok(aff) = solve_kkt(&r_aff) else {
            return Ok(best_with_status(best, SdpStatus::NumericalFailure));
        };
        let (ds_a, dx_a) = (aff.ds, aff.dx);
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for b in 0..nb {
            ap = ap.min(max_step(&it.x[b], &dx_a[b])?);
            ad = ad.min(max_step(&it.s[b], &ds_a[b])?);
        }
        let mut mu_aff = 0.0;
        for b in 0..nb {
            let mut xa = it.x[b].clone();
            xa.scaled_add(ap, &dx_a[b]);
            let mut sa = it.s[b].clone();
            sa.scaled_add(ad, &ds_a[b]);
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= ntot as f64;
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-8, 1.0);

        // corrector: R = σμ·S⁻¹ − X − sym(ΔX_aff·ΔS_aff·S⁻¹)
        let r_cor: Vec<Mat> = (0..nb).map(|b| {
            let mut r = scal[b].s_inv.clone();
            r.scale(sigma * mu);
            r.scaled_add(-1.0, &it.x[b]);
            let mut second = dx_a[b].matmul(&ds_a[b]).matmul(&scal[b].s_inv);
            second.symmetrize();
            r.scaled_add(-1.0, &second);
            r
        }).collect();
        let Ok(step) = solve_kkt(&r_cor) else {
            return Ok(best_with_status(best, SdpStatus::NumericalFailure));
        };
        let KktStep { dy, dt, ds, dx } = step;
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for b in 0..nb {
            ap = ap.min(max_step(&it.x[b], &dx[b])?);
            ad = ad.min(max_step(&it.s[b], &ds[b])?);
        }
        let ap = (0.98 * ap).min(1.0);
        let ad = (0.98 * ad).min(1.0);

        for b in 0..nb {
            it.x[b].scaled_add(ap, &dx[b]);
            it.x[b].symmetrize();
            it.s[b].scaled_add(ad, &ds[b]);
            it.s[b].symmetrize();
        }
        for k in 0..nf {
            it.t[k] += ap * dt[k];
        }
        for r in 0..m {
            it.y[r] += ad * dy[r];
        }
        if it.x.iter().any(|x| !x.is_finite()) || it.s.iter().any(|s| !s.is_finite()) {
            return Ok(best_with_status(best, SdpStatus::NumericalFailure));
        }
    }
    Ok(best)
}

fn best_with_status(mut best: SdpSolution, status: SdpStatus) -> SdpSolution {
    best.status = status;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_trace_with_unit_diagonal() {
        // max tr(X), X ⪰ 0, diag(X) = 1, dim 2 → 2
        let mut rows = Vec::new();
        for i in 0..2 {
            let mut r = SdpExpr::new();
            r.push_entry(0, i, i);
            rows.push(r);
        }
        let mut obj = SdpExpr::new();
        obj.push_entry(0, 0, 0);
        obj.push_entry(0, 1, 1);
        let p = SDProblem {
            block_dims: vec![2],
            nfree: 0,
            rows,
            rhs: vec![1.0, 1.0],
            objective: obj,
            direction: Direction::Max,
        };
        let sol = sdp_solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.value - 2.0).abs() < 1e-6, "value {}", sol.value);
        let check = verify_dual_feasible_sdp(&p, &sol.duals, 1e-6).unwrap();
        assert!(check.feasible, "residual {}", check.worst_residual);
        assert!((check.bound - sol.value).abs() < 1e-5);
    }

    #[test]
    fn largest_eigenvalue_via_free_variable() {
        // min t s.t. t·I − A ⪰ 0 for A = [[2,1],[1,2]] → 3
        // variable X := t·I − A: rows pin X_ij = t·δ_ij − A_ij
        let a = [[2.0, 1.0], [1.0, 2.0]];
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..2 {
            for j in i..2 {
                let mut r = SdpExpr::new();
                r.push_entry(0, i, j);
                r.push_free(0, -f64::from(u8::from(i == j)));
                rows.push(r);
                rhs.push(-a[i][j]);
            }
        }
        let mut obj = SdpExpr::new();
        obj.push_free(0, 1.0);
        let p = SDProblem {
            block_dims: vec![2],
            nfree: 1,
            rows,
            rhs,
            objective: obj,
            direction: Direction::Min,
        };
        let sol = sdp_solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.value - 3.0).abs() < 1e-6, "value {}", sol.value);
        assert!((sol.free_vars[0] - 3.0).abs() < 1e-6);
        let check = verify_dual_feasible_sdp(&p, &sol.duals, 1e-6).unwrap();
        assert!(check.feasible, "residual {}", check.worst_residual);
    }

    #[test]
    fn rank_one_boundary_optimum() {
        // max ⟨diag(1, ½), X⟩ s.t. tr X = 1 → 1, optimal X rank-1
        let mut row = SdpExpr::new();
        row.push_entry(0, 0, 0);
        row.push_entry(0, 1, 1);
        let mut obj = SdpExpr::new();
        obj.push_entry(0, 0, 0);
        obj.push_entry_scaled(0, 1, 1, 0.5);
        let p = SDProblem {
            block_dims: vec![2],
            nfree: 0,
            rows: vec![row],
            rhs: vec![1.0],
            objective: obj,
            direction: Direction::Max,
        };
        let sol = sdp_solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.value - 1.0).abs() < 1e-6);
        assert!((sol.primal_blocks[0][(0, 0)] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn primal_dual_weak_duality_holds() {
        // slightly off-center problem; check value ≤ dual bound + tol
        let mut row = SdpExpr::new();
        row.push_entry(0, 0, 0);
        row.push_entry(0, 1, 1);
        row.push_entry_scaled(0, 0, 1, 0.6);
        let mut obj = SdpExpr::new();
        obj.push_entry(0, 0, 0);
        obj.push_entry_scaled(0, 0, 1, 1.0);
        let p = SDProblem {
            block_dims: vec![2],
            nfree: 0,
            rows: vec![row],
            rhs: vec![1.0],
            objective: obj,
            direction: Direction::Max,
        };
        let sol = sdp_solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        let check = verify_dual_feasible_sdp(&p, &sol.duals, 1e-6).unwrap();
        assert!(check.feasible);
        assert!(sol.value <= check.bound + 1e-6);
    }
}
