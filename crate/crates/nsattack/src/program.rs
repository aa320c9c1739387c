//! Standard form of the distance-from-uniform program and its dual
//! certificates.
//!
//! For a system P and a bit function f of the first party's output, the
//! attack optimizes a signed table Δ over all cells:
//!
//!   maximize   Σ_{f=0} Δ − Σ_{f=1} Δ    (cells at the fixed inputs)
//!   subject to A_ns·Δ = 0,  −P ≤ Δ ≤ P,
//!
//! written with inequality rows only as A·Δ ≤ c with
//! A = [+A_ns; −A_ns; +I; −I] and c = (0, 0, P, P). The guessing distance
//! is half the optimum. Dual vectors λ ≥ 0 with AᵀΛ = b certify
//! d ≤ cᵀλ/2; they tensor across independent systems, which is what makes
//! multi-system bounds tractable.

use crate::error::AttackError;
use crate::matrix::build_ns_constraint_matrix;
use nlst_core::{BitFunction, Scenario, System};
use nlst_optkernel::{Bound, Direction, LinearProgram, Mat, Sense};

/// The data of one distance program in standard form.
#[derive(Debug, Clone)]
pub struct DistanceProgram {
    scenario: Scenario,
    fixed_inputs: Vec<usize>,
    ns: Mat,
    table: Vec<f64>,
    objective: Vec<f64>,
}

impl DistanceProgram {
    /// Assemble the program for guessing f(first party's output) when the
    /// parties use `fixed_inputs`.
    pub fn new(
        sys: &System,
        f: &BitFunction,
        fixed_inputs: &[usize],
    ) -> Result<Self, AttackError> {
        let scenario = sys.scenario().clone();
        if fixed_inputs.len() != scenario.parties() {
            return Err(AttackError::Shape(format!(
                "{} fixed inputs for {} parties",
                fixed_inputs.len(),
                scenario.parties()
            )));
        }
        for (party, (&ix, &size)) in fixed_inputs
            .iter()
            .zip(scenario.input_sizes())
            .enumerate()
        {
            if ix >= size {
                return Err(AttackError::InputOutOfRange { party, index: ix });
            }
        }
        f.validate(scenario.output_sizes()[0])?;
        let check = sys.is_nonsignalling(1e-9);
        if !check.ok {
            return Err(AttackError::NotNonsignaling(check.worst_residual));
        }
        let ns = build_ns_constraint_matrix(&scenario)?;
        let cells = scenario.cells() as usize;
        let mut objective = vec![0.0; cells];
        scenario.for_each_output_at(fixed_inputs, |outputs, cell| {
            objective[cell] = if f.eval(outputs[0]) == 0 { 1.0 } else { -1.0 };
        });
        Ok(DistanceProgram {
            scenario,
            fixed_inputs: fixed_inputs.to_vec(),
            ns,
            table: sys.table().to_vec(),
            objective,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn fixed_inputs(&self) -> &[usize] {
        &self.fixed_inputs
    }

    pub fn cells(&self) -> usize {
        self.table.len()
    }

    pub fn ns_rows(&self) -> usize {
        self.ns.nrows()
    }

    /// The objective vector b (±1 on the fixed-input cells, 0 elsewhere).
    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// The rhs vector c = (0_{ns}, 0_{ns}, P, P).
    pub fn rhs(&self) -> Vec<f64> {
        let mut c = vec![0.0; 2 * self.ns_rows()];
        c.extend_from_slice(&self.table);
        c.extend_from_slice(&self.table);
        c
    }

    /// Materialize as a general LP over free Δ with ≤ rows only.
    pub fn to_lp(&self) -> LinearProgram {
        let cells = self.cells();
        let r = self.ns_rows();
        let mut a = Mat::zeros(2 * r + 2 * cells, cells);
        for i in 0..r {
            a.row_mut(i).copy_from_slice(self.ns.row(i));
            for j in 0..cells {
                a[(r + i, j)] = -self.ns[(i, j)];
            }
        }
        for j in 0..cells {
            a[(2 * r + j, j)] = 1.0;
            a[(2 * r + cells + j, j)] = -1.0;
        }
        LinearProgram {
            objective: self.objective.clone(),
            rows: a,
            rhs: self.rhs(),
            senses: vec![Sense::Le; 2 * r + 2 * cells],
            bounds: vec![Bound::Free; cells],
            direction: Direction::Max,
        }
    }
}

/// A nonnegative dual vector for a distance program, stored in the row
/// layout (+A_ns | −A_ns | +I | −I).
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    lambda: Vec<f64>,
    ns_rows: usize,
    cells: usize,
}

/// Result of replaying a certificate against its program.
#[derive(Debug, Clone, Copy)]
pub struct CertificateCheck {
    pub feasible: bool,
    /// Worst violation across λ ≥ 0 and the stationarity rows Aᵀλ = b.
    pub worst_residual: f64,
    /// cᵀλ: an upper bound on the program optimum when feasible.
    pub objective_bound: f64,
}

impl DualCertificate {
    pub fn new(lambda: Vec<f64>, ns_rows: usize, cells: usize) -> Result<Self, AttackError> {
        if lambda.len() != 2 * ns_rows + 2 * cells {
            return Err(AttackError::Shape(format!(
                "certificate length {} for layout ({ns_rows} ns rows, {cells} cells)",
                lambda.len()
            )));
        }
        if !lambda.iter().all(|v| v.is_finite()) {
            return Err(AttackError::Shape("certificate entries must be finite".into()));
        }
        Ok(DualCertificate { lambda, ns_rows, cells })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn ns_rows(&self) -> usize {
        self.ns_rows
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn ns_plus(&self) -> &[f64] {
        &self.lambda[..self.ns_rows]
    }

    pub fn ns_minus(&self) -> &[f64] {
        &self.lambda[self.ns_rows..2 * self.ns_rows]
    }

    /// Multipliers for the rows Δ ≤ P.
    pub fn upper(&self) -> &[f64] {
        &self.lambda[2 * self.ns_rows..2 * self.ns_rows + self.cells]
    }

    /// Multipliers for the rows −Δ ≤ P.
    pub fn lower(&self) -> &[f64] {
        &self.lambda[2 * self.ns_rows + self.cells..]
    }

    /// Combined per-cell weight λ⁺ + λ⁻ of the table-bound rows; the
    /// program bound is Σ_cell weight·P(cell) whenever the nonsignaling
    /// rows carry rhs 0.
    pub fn cell_weight(&self, cell: usize) -> f64 {
        self.upper()[cell] + self.lower()[cell]
    }

    /// Replay feasibility against a program: λ ≥ 0 and Aᵀλ = b exactly in
    /// the standard layout, reporting the worst violation and the bound.
    pub fn verify(&self, program: &DistanceProgram) -> Result<CertificateCheck, AttackError> {
        if self.ns_rows != program.ns_rows() || self.cells != program.cells() {
            return Err(AttackError::Shape(format!(
                "certificate layout ({}, {}) vs program ({}, {})",
                self.ns_rows,
                self.cells,
                program.ns_rows(),
                program.cells()
            )));
        }
        let mut worst = 0.0f64;
        for &v in &self.lambda {
            worst = worst.max(-v);
        }
        // Aᵀλ = nsᵀ(λ⁺ − λ⁻) + (upper − lower)
        let mut station = vec![0.0; self.cells];
        for i in 0..self.ns_rows {
            let w = self.ns_plus()[i] - self.ns_minus()[i];
            if w != 0.0 {
                for (j, &a) in program.ns.row(i).iter().enumerate() {
                    station[j] += w * a;
                }
            }
        }
        for (j, s) in station.iter_mut().enumerate() {
            *s += self.upper()[j] - self.lower()[j];
            worst = worst.max((*s - program.objective[j]).abs());
        }
        let objective_bound = self
            .lambda
            .iter()
            .zip(program.rhs())
            .map(|(l, c)| l * c)
            .sum();
        Ok(CertificateCheck {
            feasible: worst <= 1e-9,
            worst_residual: worst,
            objective_bound,
        })
    }

    /// The certified distance bound cᵀλ/2 for the given program.
    pub fn distance_bound(&self, program: &DistanceProgram) -> Result<f64, AttackError> {
        let check = self.verify(program)?;
        if !check.feasible {
            return Err(AttackError::InfeasibleCertificate {
                residual: check.worst_residual,
            });
        }
        Ok(check.objective_bound / 2.0)
    }
}

/// The per-cell event weights carried by a certificate: the bound reads
/// Σ_cell weight·P(cell), so weight/λ_max is the head-probability with
/// which a cell participates in the certified failure event.
#[derive(Debug, Clone)]
pub struct DualEvent {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
}

pub fn dual_event_decomposition(cert: &DualCertificate) -> DualEvent {
    let weights: Vec<f64> = (0..cert.cells()).map(|j| cert.cell_weight(j)).collect();
    let lambda_max = weights.iter().fold(0.0f64, |a, &b| a.max(b));
    DualEvent { weights, lambda_max }
}

/// The hand-derived optimal certificate for the bipartite binary program
/// at fixed inputs (0,0) with f the identity bit: half-weights on
/// alternating nonsignaling rows and unit weights splitting the eight
/// cells with x⊕y ≠ u·v across the two bound fans. Its bound on the
/// unbiased ε-box is 4ε, i.e. distance 2ε.
pub fn chsh_identity_certificate() -> DualCertificate {
    let mut lambda = vec![0.0; 48];
    for k in 0..4 {
        lambda[2 * k] = 0.5;
        lambda[8 + 2 * k + 1] = 0.5;
    }
    for cell in [1usize, 3, 10, 12] {
        lambda[16 + cell] = 1.0;
    }
    for cell in [4usize, 6, 9, 15] {
        lambda[32 + cell] = 1.0;
    }
    DualCertificate::new(lambda, 8, 16).expect("fixed layout")
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlst_core::builders::unbiased_pr_box;

    #[test]
    fn identity_certificate_verifies_at_four_eps() {
        for &eps in &[0.0, 0.05, 0.1, 0.25] {
            let sys = unbiased_pr_box(eps).unwrap();
            let prog =
                DistanceProgram::new(&sys, &BitFunction::Table(vec![0, 1]), &[0, 0]).unwrap();
            let cert = chsh_identity_certificate();
            let check = cert.verify(&prog).unwrap();
            assert!(check.feasible, "residual {}", check.worst_residual);
            assert!(
                (check.objective_bound - 4.0 * eps).abs() < 1e-12,
                "bound {} at eps {eps}",
                check.objective_bound
            );
            assert!((cert.distance_bound(&prog).unwrap() - 2.0 * eps).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_certificate_event_is_the_game_losing_indicator() {
        let cert = chsh_identity_certificate();
        let event = dual_event_decomposition(&cert);
        assert_eq!(event.lambda_max, 1.0);
        for u in 0..2usize {
            for x in 0..2usize {
                for v in 0..2usize {
                    for y in 0..2usize {
                        let cell = 8 * u + 4 * x + 2 * v + y;
                        let losing = (x ^ y) != (u & v);
                        assert_eq!(event.weights[cell], f64::from(u8::from(losing)));
                    }
                }
            }
        }
    }

    #[test]
    fn scaled_certificate_scales_the_event() {
        let base = chsh_identity_certificate();
        let doubled = DualCertificate::new(
            base.lambda().iter().map(|v| 2.0 * v).collect(),
            8,
            16,
        )
        .unwrap();
        let event = dual_event_decomposition(&doubled);
        assert_eq!(event.lambda_max, 2.0);
        let base_event = dual_event_decomposition(&base);
        for (a, b) in event.weights.iter().zip(&base_event.weights) {
            assert_eq!(*a, 2.0 * b);
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let sys = unbiased_pr_box(0.1).unwrap();
        let f = BitFunction::Table(vec![0, 1]);
        assert!(matches!(
            DistanceProgram::new(&sys, &f, &[0]),
            Err(AttackError::Shape(_))
        ));
        assert!(matches!(
            DistanceProgram::new(&sys, &f, &[0, 2]),
            Err(AttackError::InputOutOfRange { party: 1, index: 2 })
        ));
        assert!(DualCertificate::new(vec![0.0; 7], 8, 16).is_err());
    }
}
