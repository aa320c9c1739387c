//! Two-phase revised simplex over an abstract column source, so wide
//! programs (tens of thousands of columns) never materialize their matrix.
//! Dense basis inverse with product-form updates and periodic
//! refactorization; Dantzig pricing with a Bland fallback after degenerate
//! stalls (anti-cycling).

use crate::error::KernelError;
use crate::mat::{lu_factor, Mat};

/// Column access for the standard-form program
/// min Σ cost(j)·x_j  s.t.  Σ x_j·column(j) = rhs,  x ≥ 0.
pub trait ColumnSource {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn cost(&self, j: usize) -> f64;
    /// Write column j's nonzeros as (row, coeff) into `out` (cleared first).
    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>);
}

/// Dense matrix wrapper implementing [`ColumnSource`].
pub struct DenseColumns {
    pub a: Mat,
    pub costs: Vec<f64>,
}

impl ColumnSource for DenseColumns {
    fn nrows(&self) -> usize {
        self.a.nrows()
    }
    fn ncols(&self) -> usize {
        self.a.ncols()
    }
    fn cost(&self, j: usize) -> f64 {
        self.costs[j]
    }
    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        for i in 0..self.a.nrows() {
            let v = self.a[(i, j)];
            if v != 0.0 {
                out.push((i, v));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct StandardSolution {
    pub status: StandardStatus,
    /// Dense primal values over the source's columns (optimal only).
    pub x: Vec<f64>,
    pub value: f64,
    /// Row duals y = c_B·B⁻¹ for the phase-2 costs.
    pub duals: Vec<f64>,
    /// Final basis: the basic column per row, None for that row's
    /// artificial. Feeds warm starts of closely related programs.
    pub basis: Vec<Option<usize>>,
    pub iterations: usize,
}

const REFACTOR_EVERY: usize = 32;
const STALL_LIMIT: usize = 60;
const MAX_ITERATIONS: usize = 200_000;

struct SimplexState<'a> {
    src: &'a dyn ColumnSource,
    rhs: &'a [f64],
    m: usize,
    n: usize,
    /// basis[i] < n is a source column; basis[i] = n+i is row i's artificial
    basis: Vec<usize>,
    /// membership flags for source columns, so pricing never re-admits a
    /// basic column (whose true reduced cost is zero — only rounding drift
    /// could make it look improving, and re-entry makes the basis singular)
    in_basis: Vec<bool>,
    binv: Mat,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    stall: usize,
    bland: bool,
    tol: f64,
    colbuf: Vec<(usize, f64)>,
}

enum PhaseEnd {
    NoImproving,
    Unbounded,
}

impl<'a> SimplexState<'a> {
    fn new(src: &'a dyn ColumnSource, rhs: &'a [f64], tol: f64) -> Self {
        let m = src.nrows();
        SimplexState {
            src,
            rhs,
            m,
            n: src.ncols(),
            basis: (0..m).map(|i| src.ncols() + i).collect(),
            in_basis: vec![false; src.ncols()],
            binv: Mat::identity(m),
            xb: rhs.to_vec(),
            iterations: 0,
            since_refactor: 0,
            stall: 0,
            bland: false,
            tol,
            colbuf: Vec::new(),
        }
    }

    /// Install a proposed starting basis (None = keep row's artificial).
    /// Falls back to the all-artificial start — and reports it — when the
    /// proposal is singular or infeasible, so callers can hand over a stale
    /// basis without checking it themselves.
    fn try_warm_start(&mut self, start: &[Option<usize>]) -> bool {
        for (i, slot) in start.iter().enumerate() {
            match *slot {
                Some(j) if j < self.n => {
                    self.basis[i] = j;
                    self.in_basis[j] = true;
                }
                _ => self.basis[i] = self.n + i,
            }
        }
        if self.refactor().is_err() || self.xb.iter().any(|&v| v < -1e-7) {
            self.basis = (0..self.m).map(|i| self.n + i).collect();
            self.in_basis = vec![false; self.n];
            self.binv = Mat::identity(self.m);
            self.xb = self.rhs.to_vec();
            self.since_refactor = 0;
            return false;
        }
        true
    }

    fn basis_cost(&self, i: usize, phase1: bool) -> f64 {
        let j = self.basis[i];
        if j >= self.n {
            if phase1 {
                1.0
            } else {
                0.0
            }
        } else if phase1 {
            0.0
        } else {
            self.src.cost(j)
        }
    }

    fn duals(&self, phase1: bool) -> Vec<f64> {
        let cb: Vec<f64> = (0..self.m).map(|i| self.basis_cost(i, phase1)).collect();
        self.binv.tr_matvec(&cb)
    }

    /// d = B⁻¹·a_j from the sparse column.
    fn direction(&mut self, j: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.m];
        if j >= self.n {
            let row = j - self.n;
            for i in 0..self.m {
                d[i] = self.binv[(i, row)];
            }
            return d;
        }
        self.src.column(j, &mut self.colbuf);
        for &(row, c) in &self.colbuf {
            if c != 0.0 {
                for i in 0..self.m {
                    d[i] += self.binv[(i, row)] * c;
                }
            }
        }
        d
    }

    fn refactor(&mut self) -> Result<(), KernelError> {
        let mut b = Mat::zeros(self.m, self.m);
        for (i, &j) in self.basis.clone().iter().enumerate() {
            if j >= self.n {
                b[(j - self.n, i)] = 1.0;
            } else {
                self.src.column(j, &mut self.colbuf);
                for &(row, c) in &self.colbuf {
                    b[(row, i)] = c;
                }
            }
        }
        self.binv = lu_factor(&b, "simplex basis refactorization")?.inverse();
        self.xb = self.binv.matvec(self.rhs);
        for v in &mut self.xb {
            if *v < 0.0 && *v > -1e-7 {
                *v = 0.0;
            }
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn price(&mut self, phase1: bool) -> Option<usize> {
        let y = self.duals(phase1);
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n {
            if self.in_basis[j] {
                continue;
            }
            let cost = if phase1 { 0.0 } else { self.src.cost(j) };
            self.src.column(j, &mut self.colbuf);
            let mut red = cost;
            for &(row, c) in &self.colbuf {
                red -= y[row] * c;
            }
            if red < -self.tol {
                if self.bland {
                    return Some(j); // lowest improving index
                }
                match best {
                    Some((_, b)) if red >= b => {}
                    _ => best = Some((j, red)),
                }
            }
        }
        best.map(|(j, _)| j)
    }

    /// Choose the leaving row for entering direction d. Besides the
    /// standard positive-direction ratio test, rows holding an artificial
    /// at zero block negative directions (ratio 0), which both keeps
    /// artificials from regrowing in phase 2 and drives them out.
    ///
    /// The default rule is a two-pass Harris test: pass 1 bounds the step
    /// with a small feasibility slack, pass 2 picks the largest pivot
    /// magnitude among rows within the bound — tiny pivots are what blow
    /// up the product-form inverse on degenerate bases. Under the Bland
    /// fallback the exact minimum ratio with the lowest basis index is
    /// used instead, as the anti-cycling proof requires.
    fn leaving_row(&self, d: &[f64]) -> Option<usize> {
        let ratio_tol = 1e-11;
        let pivot_floor = 1e-7;
        let feas_slack = 1e-9;

        // a zero-level artificial moving negative must leave right now
        // (step 0); among such rows take the most stable pivot
        let mut art_guard: Option<usize> = None;
        for i in 0..self.m {
            if self.basis[i] >= self.n
                && d[i] < -pivot_floor
                && self.xb[i] <= self.tol
                && art_guard.map_or(true, |g| d[i].abs() > d[g].abs())
            {
                art_guard = Some(i);
            }
        }

        if self.bland {
            let mut best: Option<(usize, f64)> = art_guard.map(|i| (i, 0.0));
            for i in 0..self.m {
                if d[i] > ratio_tol {
                    let theta = self.xb[i].max(0.0) / d[i];
                    let better = match best {
                        None => true,
                        Some((r, t)) => {
                            if (theta - t).abs() <= 1e-12 {
                                self.basis[i] < self.basis[r]
                            } else {
                                theta < t
                            }
                        }
                    };
                    if better {
                        best = Some((i, theta));
                    }
                }
            }
            return best.map(|(i, _)| i);
        }

        if let Some(i) = art_guard {
            return Some(i);
        }
        // Harris pass 1: step bound with slack
        let mut theta_max = f64::INFINITY;
        let mut fallback: Option<usize> = None; // largest positive d overall
        for i in 0..self.m {
            if d[i] > ratio_tol {
                theta_max = theta_max.min((self.xb[i].max(0.0) + feas_slack) / d[i]);
                if fallback.map_or(true, |f| d[i] > d[f]) {
                    fallback = Some(i);
                }
            }
        }
        fallback?;
        // Harris pass 2: most stable pivot within the bound
        let mut best: Option<usize> = None;
        for i in 0..self.m {
            if d[i] > ratio_tol && self.xb[i].max(0.0) / d[i] <= theta_max {
                let stable_enough = d[i] >= pivot_floor;
                let replaces = match best {
                    None => true,
                    Some(b) => {
                        let best_stable = d[b] >= pivot_floor;
                        match (stable_enough, best_stable) {
                            (true, false) => true,
                            (false, true) => false,
                            _ => d[i] > d[b],
                        }
                    }
                };
                if replaces {
                    best = Some(i);
                }
            }
        }
        best.or(fallback)
    }

    fn pivot(&mut self, r: usize, j: usize, d: &[f64]) {
        let theta = if d[r].abs() > 0.0 {
            (self.xb[r].max(0.0) / d[r]).max(0.0)
        } else {
            0.0
        };
        for i in 0..self.m {
            if i != r {
                self.xb[i] -= theta * d[i];
                if self.xb[i] < 0.0 && self.xb[i] > -1e-9 {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let leaving = self.basis[r];
        if leaving < self.n {
            self.in_basis[leaving] = false;
        }
        self.basis[r] = j;
        if j < self.n {
            self.in_basis[j] = true;
        }

        // product-form update of B⁻¹
        let dr = d[r];
        for k in 0..self.m {
            self.binv[(r, k)] /= dr;
        }
        for i in 0..self.m {
            if i != r && d[i] != 0.0 {
                let f = d[i];
                for k in 0..self.m {
                    let v = self.binv[(r, k)];
                    self.binv[(i, k)] -= f * v;
                }
            }
        }

        if theta <= 1e-12 {
            self.stall += 1;
            if self.stall > STALL_LIMIT {
                self.bland = true;
            }
        } else {
            self.stall = 0;
            self.bland = false;
        }
    }

    fn run_phase(&mut self, phase1: bool) -> Result<PhaseEnd, KernelError> {
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(KernelError::Numerical {
                    what: "simplex iteration limit",
                    residual: self.iterations as f64,
                    limit: MAX_ITERATIONS as f64,
                });
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let Some(j) = self.price(phase1) else {
                return Ok(PhaseEnd::NoImproving);
            };
            let d = self.direction(j);
            let Some(r) = self.leaving_row(&d) else {
                return Ok(PhaseEnd::Unbounded);
            };
            self.pivot(r, j, &d);
            self.iterations += 1;
            self.since_refactor += 1;
        }
    }
}

/// Solve min cᵀx s.t. A·x = rhs, x ≥ 0 (rhs must be non-negative; callers
/// pre-flip row signs). Two phases with an all-artificial start.
pub fn solve_standard(
    src: &dyn ColumnSource,
    rhs: &[f64],
    tol: f64,
) -> Result<StandardSolution, KernelError> {
    solve_standard_from(src, rhs, tol, None)
}

fn basis_slots(st: &SimplexState) -> Vec<Option<usize>> {
    st.basis
        .iter()
        .map(|&j| if j < st.n { Some(j) } else { None })
        .collect()
}

/// The two-phase solve behind [`solve_standard`], optionally warm-started
/// from a known basis (one slot per row, None = artificial). A feasible
/// start skips phase 1 entirely, which is what makes repeated solves over
/// a growing column set cheap.
fn solve_standard_from(
    src: &dyn ColumnSource,
    rhs: &[f64],
    tol: f64,
    start: Option<&[Option<usize>]>,
) -> Result<StandardSolution, KernelError> {
    if rhs.len() != src.nrows() {
        return Err(KernelError::Dimension(format!(
            "rhs has {} entries for {} rows",
            rhs.len(),
            src.nrows()
        )));
    }
    if let Some(i) = rhs.iter().position(|v| !v.is_finite()) {
        return Err(KernelError::NonFinite { what: "rhs", index: i });
    }
    debug_assert!(rhs.iter().all(|&v| v >= -1e-12));

    let mut st = SimplexState::new(src, rhs, tol);
    if let Some(start) = start {
        if start.len() == st.m {
            st.try_warm_start(start);
        }
    }

    // phase 1: minimize the artificial mass (zero when the start is already
    // feasible through real columns)
    let artificial_mass: f64 = (0..st.m)
        .filter(|&i| st.basis[i] >= st.n)
        .map(|i| st.xb[i].max(0.0))
        .sum();
    if artificial_mass > 0.0 {
        st.run_phase(true)?;
        let infeasibility: f64 = (0..st.m)
            .filter(|&i| st.basis[i] >= st.n)
            .map(|i| st.xb[i].max(0.0))
            .sum();
        let scale = 1.0 + rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if infeasibility > 1e-7 * scale {
            return Ok(StandardSolution {
                status: StandardStatus::Infeasible,
                x: vec![0.0; st.n],
                value: infeasibility,
                duals: st.duals(true),
                basis: basis_slots(&st),
                iterations: st.iterations,
            });
        }
    }

    // phase 2 on the real costs; after the first pass, refactorize to shed
    // accumulated product-form error and polish until truly optimal
    for pass in 0..2 {
        if matches!(st.run_phase(false)?, PhaseEnd::Unbounded) {
            return Ok(StandardSolution {
                status: StandardStatus::Unbounded,
                x: vec![0.0; st.n],
                value: f64::NEG_INFINITY,
                duals: vec![0.0; st.m],
                basis: basis_slots(&st),
                iterations: st.iterations,
            });
        }
        if pass == 0 {
            st.refactor()?;
        }
    }

    let mut x = vec![0.0; st.n];
    for i in 0..st.m {
        if st.basis[i] < st.n {
            x[st.basis[i]] = st.xb[i].max(0.0);
        }
    }
    let value = x
        .iter()
        .enumerate()
        .map(|(j, &v)| if v != 0.0 { v * src.cost(j) } else { 0.0 })
        .sum();
    let duals = st.duals(false);
    Ok(StandardSolution {
        status: StandardStatus::Optimal,
        x,
        value,
        duals,
        basis: basis_slots(&st),
        iterations: st.iterations,
    })
}

/// A column source restricted to an index subset of another source.
struct SubsetColumns<'a> {
    src: &'a dyn ColumnSource,
    keep: &'a [usize],
}

impl ColumnSource for SubsetColumns<'_> {
    fn nrows(&self) -> usize {
        self.src.nrows()
    }
    fn ncols(&self) -> usize {
        self.keep.len()
    }
    fn cost(&self, j: usize) -> f64 {
        self.src.cost(self.keep[j])
    }
    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>) {
        self.src.column(self.keep[j], out);
    }
}

/// Delayed column generation for very wide programs: repeatedly solve the
/// program restricted to an active column subset, then price every column
/// against the restricted duals and admit up to `batch` of the most
/// negative ones. Terminates when no column prices below −tol, at which
/// point the restricted answer is optimal (or infeasible, via the phase-1
/// duals as a Farkas certificate) for the full program. `initial` seeds
/// the active set — slack columns are a good choice.
pub fn solve_with_column_generation(
    src: &dyn ColumnSource,
    rhs: &[f64],
    initial: &[usize],
    batch: usize,
    tol: f64,
) -> Result<StandardSolution, KernelError> {
    let n = src.ncols();
    let batch = batch.max(1);
    // pos[j] = index of source column j inside `active` (append-only, so
    // positions are stable across rounds), usize::MAX when inactive
    let mut pos = vec![usize::MAX; n];
    let mut active = Vec::with_capacity(initial.len());
    for &j in initial {
        if j >= n {
            return Err(KernelError::Dimension(format!(
                "initial column {j} out of range for {n} columns"
            )));
        }
        if pos[j] == usize::MAX {
            pos[j] = active.len();
            active.push(j);
        }
    }
    let mut colbuf = Vec::new();
    let mut iterations = 0usize;
    // previous round's basis in source-column space; the column set only
    // grows, so it stays feasible and the next solve skips phase 1
    let mut warm: Option<Vec<Option<usize>>> = None;
    loop {
        let sub = SubsetColumns {
            src,
            keep: &active,
        };
        let start: Option<Vec<Option<usize>>> = warm
            .as_ref()
            .map(|slots| slots.iter().map(|s| s.map(|j| pos[j])).collect());
        let sol = solve_standard_from(&sub, rhs, tol, start.as_deref())?;
        iterations += sol.iterations;
        let source_basis =
            |sol: &StandardSolution| sol.basis.iter().map(|&b| b.map(|k| active[k])).collect();
        if sol.status == StandardStatus::Unbounded {
            return Ok(StandardSolution {
                iterations,
                x: vec![0.0; n],
                basis: source_basis(&sol),
                ..sol
            });
        }
        // price the full set: real costs at an optimum, artificial mass
        // (phase-1 costs, all zero on real columns) while still infeasible
        let feasibility_pricing = sol.status == StandardStatus::Infeasible;
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        for j in 0..n {
            if pos[j] != usize::MAX {
                continue;
            }
            src.column(j, &mut colbuf);
            let mut red = if feasibility_pricing { 0.0 } else { src.cost(j) };
            for &(row, c) in &colbuf {
                red -= sol.duals[row] * c;
            }
            if red < -tol {
                candidates.push((red, j));
            }
        }
        if candidates.is_empty() {
            let mut x = vec![0.0; n];
            for (k, &j) in active.iter().enumerate() {
                if sol.x[k] != 0.0 {
                    x[j] = sol.x[k];
                }
            }
            return Ok(StandardSolution {
                iterations,
                x,
                basis: source_basis(&sol),
                ..sol
            });
        }
        warm = Some(source_basis(&sol));
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite reduced costs"));
        for &(_, j) in candidates.iter().take(batch) {
            pos[j] = active.len();
            active.push(j);
        }
    }
}
