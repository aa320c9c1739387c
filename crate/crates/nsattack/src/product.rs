//! Product-form dual certificates. A dual vector for each single-system
//! program tensors into a dual for the product program (constraint matrix
//! A₁⊗…⊗Aₙ, objective b₁⊗…⊗bₙ), which bounds multi-system attacks — in
//! particular the XOR of per-system bits — without ever solving a joint
//! program. Feasibility of the product is implied algebraically; this
//! module also replays it explicitly by scattering the Kronecker rows,
//! for independent confirmation on small n.

use crate::error::AttackError;
use crate::program::{CertificateCheck, DistanceProgram, DualCertificate};
use nlst_core::System;

/// A factored dual certificate for a product-form program.
#[derive(Debug, Clone)]
pub struct ProductDual {
    factors: Vec<DualCertificate>,
}

/// Tensor single-system certificates into a product certificate
/// (λ = λ₁⊗…⊗λₙ, kept factored).
pub fn tensor_dual(factors: &[DualCertificate]) -> Result<ProductDual, AttackError> {
    if factors.is_empty() {
        return Err(AttackError::Shape("product of zero certificates".into()));
    }
    Ok(ProductDual {
        factors: factors.to_vec(),
    })
}

/// Cap on the joint cell count for explicit product verification.
const JOINT_CELL_CAP: usize = 1 << 20;

impl ProductDual {
    pub fn factors(&self) -> &[DualCertificate] {
        &self.factors
    }

    /// Joint cell count Π cellsᵢ (Kronecker order: factor 1 slowest).
    pub fn joint_cells(&self) -> Result<usize, AttackError> {
        let mut total: usize = 1;
        for f in &self.factors {
            total = total
                .checked_mul(f.cells())
                .filter(|t| *t <= JOINT_CELL_CAP)
                .ok_or_else(|| {
                    AttackError::TooLarge(format!(
                        "joint product exceeds {JOINT_CELL_CAP} cells"
                    ))
                })?;
        }
        Ok(total)
    }

    /// Explicitly verify λ₁⊗…⊗λₙ against the product program: scatter
    /// every Kronecker row with a nonzero multiplier into a dense
    /// stationarity vector and compare with b₁⊗…⊗bₙ. Work scales with the
    /// product of per-factor nonzero row counts — fine for the sparse
    /// certificates this crate produces, capped by the joint cell bound.
    pub fn verify_explicit(
        &self,
        programs: &[&DistanceProgram],
    ) -> Result<CertificateCheck, AttackError> {
        if programs.len() != self.factors.len() {
            return Err(AttackError::Shape(format!(
                "{} programs for {} factors",
                programs.len(),
                self.factors.len()
            )));
        }
        let joint = self.joint_cells()?;

        // per factor: nonzero rows as (sparse row, multiplier, rhs entry)
        struct NzRow {
            cols: Vec<(usize, f64)>,
            lam: f64,
            rhs: f64,
        }
        let mut factor_rows: Vec<Vec<NzRow>> = Vec::with_capacity(self.factors.len());
        for (cert, prog) in self.factors.iter().zip(programs) {
            let per_check = cert.verify(prog)?;
            if !per_check.feasible {
                return Err(AttackError::InfeasibleCertificate {
                    residual: per_check.worst_residual,
                });
            }
            let lp = prog.to_lp();
            let rhs = prog.rhs();
            let mut rows = Vec::new();
            for (i, &lam) in cert.lambda().iter().enumerate() {
                if lam != 0.0 {
                    let cols: Vec<(usize, f64)> = lp
                        .rows
                        .row(i)
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| **v != 0.0)
                        .map(|(j, &v)| (j, v))
                        .collect();
                    rows.push(NzRow {
                        cols,
                        lam,
                        rhs: rhs[i],
                    });
                }
            }
            factor_rows.push(rows);
        }

        // scatter Π λᵢ · ⊗ᵢ rowᵢ over all nonzero row tuples
        let mut station = vec![0.0; joint];
        let n = factor_rows.len();
        let mut tuple = vec![0usize; n];
        'tuples: loop {
            let mut coeff = 1.0;
            for (f, &t) in tuple.iter().enumerate() {
                coeff *= factor_rows[f][t].lam;
            }
            // expand the Kronecker row recursively over its factors
            let mut cells: Vec<(usize, f64)> = vec![(0, coeff)];
            for (f, &t) in tuple.iter().enumerate() {
                let width = programs[f].cells();
                let mut next = Vec::with_capacity(cells.len() * factor_rows[f][t].cols.len());
                for &(base, c0) in &cells {
                    for &(j, v) in &factor_rows[f][t].cols {
                        next.push((base * width + j, c0 * v));
                    }
                }
                cells = next;
            }
            for (idx, v) in cells {
                station[idx] += v;
            }
            // advance the mixed-radix tuple
            for f in (0..n).rev() {
                tuple[f] += 1;
                if tuple[f] < factor_rows[f].len() {
                    continue 'tuples;
                }
                tuple[f] = 0;
                if f == 0 {
                    break 'tuples;
                }
            }
        }

        // compare against b = ⊗ bᵢ and accumulate the certified bound Πcᵢᵀλᵢ
        let mut worst = 0.0f64;
        for (idx, &s) in station.iter().enumerate() {
            let mut b = 1.0;
            let mut rest = idx;
            for f in (0..n).rev() {
                let width = programs[f].cells();
                b *= programs[f].objective()[rest % width];
                rest /= width;
            }
            worst = worst.max((s - b).abs());
        }
        let mut objective_bound = 1.0;
        for rows in &factor_rows {
            objective_bound *= rows.iter().map(|r| r.lam * r.rhs).sum::<f64>();
        }
        Ok(CertificateCheck {
            feasible: worst <= 1e-9,
            worst_residual: worst,
            objective_bound,
        })
    }

    /// Evaluate the certified objective bound cᵀλ on a joint system in
    /// tensor cell order: only the table-bound Kronecker rows carry a
    /// nonzero rhs, and summing their sign combinations collapses to
    /// Σ_cell P(cell)·Π(λᵢ⁺+λᵢ⁻). The joint system may be correlated;
    /// independence is not assumed.
    pub fn bound_on(&self, joint: &System) -> Result<f64, AttackError> {
        let cells = self.joint_cells()?;
        if joint.scenario().cells() as usize != cells {
            return Err(AttackError::Shape(format!(
                "joint system has {} cells, certificate product expects {cells}",
                joint.scenario().cells()
            )));
        }
        let mut bound = 0.0;
        for (idx, &p) in joint.table().iter().enumerate() {
            let mut w = 1.0;
            let mut rest = idx;
            for f in (0..self.factors.len()).rev() {
                let cert = &self.factors[f];
                w *= cert.cell_weight(rest % cert.cells());
                rest /= cert.cells();
            }
            bound += p * w;
        }
        Ok(bound)
    }
}

/// Distance bound for guessing the XOR of the per-system bits: half the
/// product certificate's objective bound evaluated on the joint system.
pub fn xor_bound(certs: &[DualCertificate], joint: &System) -> Result<f64, AttackError> {
    Ok(tensor_dual(certs)?.bound_on(joint)? / 2.0)
}
