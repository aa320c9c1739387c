//! The attack itself: solve the distance program, rebuild the adversary's
//! two-element partition from the optimizer, and keep the solver's dual as
//! an independently replayable certificate.

use crate::error::AttackError;
use crate::program::{DistanceProgram, DualCertificate};
use nlst_core::{BitFunction, NSPartition, System};
use nlst_optkernel::{lp_solve, LpStatus};

/// Outcome of one distance-from-uniform attack.
#[derive(Debug, Clone)]
pub struct AttackResult {
    /// d = (optimal objective)/2 ∈ [0, ½].
    pub distance: f64,
    /// The adversary's two-element partition realizing the distance.
    pub witness: NSPartition,
    /// Solver dual in the standard layout; replaying it against the
    /// program certifies the distance from above.
    pub certificate: DualCertificate,
    /// The program the certificate refers to.
    pub program: DistanceProgram,
}

/// Solve the distance program for guessing f(first party's output) at the
/// given fixed inputs. The returned partition stems from the optimal
/// signed table Δ: element weight p = ½(1 + Σ_outputs Δ at the fixed
/// inputs), tables (P ± Δ)/(2p) and /(2(1−p)).
pub fn distance_from_uniform_lp(
    sys: &System,
    f: &BitFunction,
    fixed_inputs: &[usize],
) -> Result<AttackResult, AttackError> {
    let program = DistanceProgram::new(sys, f, fixed_inputs)?;
    let lp = program.to_lp();
    let sol = lp_solve(&lp, 1e-10)?;
    if sol.status != LpStatus::Optimal {
        return Err(AttackError::SolverStatus(format!("{:?}", sol.status)));
    }
    let delta = &sol.x;

    // weight of the z₀ branch from the optimizer's mass at the fixed inputs
    let mut mass = 0.0;
    sys.scenario()
        .for_each_output_at(fixed_inputs, |_, cell| mass += delta[cell]);
    let p = (0.5 * (1.0 + mass)).clamp(0.0, 1.0);

    let branch = |sign: f64, weight: f64| -> System {
        let table: Vec<f64> = if weight > 1e-12 {
            sys.table()
                .iter()
                .zip(delta)
                .map(|(pv, dv)| ((pv + sign * dv) / (2.0 * weight)).max(0.0))
                .collect()
        } else {
            // weightless branch: any valid table; keep the parent's
            sys.table().to_vec()
        };
        System::new_unchecked(sys.scenario().clone(), table)
    };
    let witness = NSPartition::new(vec![(p, branch(1.0, p)), (1.0 - p, branch(-1.0, 1.0 - p))]);

    // non-negative dual in the standard layout (clamp solver jitter)
    let lambda: Vec<f64> = sol.duals.iter().map(|&v| v.max(0.0)).collect();
    let certificate = DualCertificate::new(lambda, program.ns_rows(), program.cells())?;
    let bound = certificate.distance_bound(&program)?;
    let distance = sol.value / 2.0;
    if distance > bound + 1e-7 {
        return Err(AttackError::InfeasibleCertificate {
            residual: distance - bound,
        });
    }
    Ok(AttackResult {
        distance,
        witness,
        certificate,
        program,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlst_core::builders::{pr_box, unbiased_pr_box};
    use nlst_core::vertices::deterministic_system;
    use nlst_core::Scenario;

    fn identity_bit() -> BitFunction {
        BitFunction::Table(vec![0, 1])
    }

    #[test]
    fn symmetric_box_distance_is_twice_eps() {
        for &eps in &[0.05, 0.1, 0.2] {
            let sys = unbiased_pr_box(eps).unwrap();
            for inputs in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let res = distance_from_uniform_lp(&sys, &identity_bit(), &inputs).unwrap();
                assert!(
                    (res.distance - 2.0 * eps).abs() < 1e-9,
                    "eps {eps} inputs {inputs:?}: {}",
                    res.distance
                );
            }
        }
    }

    #[test]
    fn pr_box_is_unattackable() {
        let res = distance_from_uniform_lp(&pr_box(), &identity_bit(), &[0, 0]).unwrap();
        assert!(res.distance.abs() < 1e-9, "{}", res.distance);
    }

    #[test]
    fn deterministic_box_is_fully_attackable() {
        let sys = deterministic_system(
            &Scenario::bipartite_binary(),
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let res = distance_from_uniform_lp(&sys, &identity_bit(), &[1, 0]).unwrap();
        assert!((res.distance - 0.5).abs() < 1e-9, "{}", res.distance);
    }

    #[test]
    fn witness_partition_reproduces_the_parent() {
        let sys = unbiased_pr_box(0.1).unwrap();
        let res = distance_from_uniform_lp(&sys, &identity_bit(), &[0, 0]).unwrap();
        let check = res.witness.validate(&sys, 1e-8).unwrap();
        assert!(check.ok, "{check:?}");
    }

    #[test]
    fn certificate_matches_primal_at_optimum() {
        let sys = unbiased_pr_box(0.15).unwrap();
        let res = distance_from_uniform_lp(&sys, &identity_bit(), &[0, 0]).unwrap();
        let bound = res.certificate.distance_bound(&res.program).unwrap();
        assert!((bound - res.distance).abs() < 1e-8, "{bound} vs {}", res.distance);
    }
}
