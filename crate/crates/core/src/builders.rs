use crate::error::SystemError;
use crate::scenario::Scenario;
use crate::system::System;

/// The unbiased PR box with error ε: Pr[X⊕Y = u·v] = 1−ε with both
/// outcome pairs on each side of the parity equally likely, i.e. entries
/// (1−ε)/2 on the cells x⊕y = u·v and ε/2 on the rest.
pub fn unbiased_pr_box(eps: f64) -> Result<System, SystemError> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(SystemError::Domain {
            name: "eps",
            value: eps,
            range: "[0, 1/2]",
        });
    }
    let s = Scenario::bipartite_binary();
    let mut t = vec![0.0; 16];
    for u in 0..2usize {
        for v in 0..2usize {
            for x in 0..2usize {
                for y in 0..2usize {
                    let hit = x ^ y == (u & v);
                    t[s.index(&[u, v], &[x, y])] =
                        if hit { (1.0 - eps) / 2.0 } else { eps / 2.0 };
                }
            }
        }
    }
    Ok(System::new_unchecked(s, t))
}

/// The error-free PR box (ε = 0): ½ on every cell with x⊕y = u·v.
pub fn pr_box() -> System {
    unbiased_pr_box(0.0).expect("0 is in range")
}

/// The quantum system reaching the CHSH maximum (2+√2)/4: the singlet
/// state measured in the optimal bases. Its table is exactly the unbiased
/// box with error (2−√2)/4, entries (2+√2)/8 and (2−√2)/8.
pub fn tsirelson_system() -> System {
    unbiased_pr_box((2.0 - std::f64::consts::SQRT_2) / 4.0).expect("in range")
}

/// The Tsirelson system mixed with weight ρ of uniform noise:
/// (1−ρ)·T + ρ/4 per cell.
pub fn noisy_singlet_system(rho: f64) -> Result<System, SystemError> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(SystemError::Domain {
            name: "rho",
            value: rho,
            range: "[0, 1]",
        });
    }
    let t = tsirelson_system();
    let table: Vec<f64> = t
        .table()
        .iter()
        .map(|&p| (1.0 - rho) * p + rho / 4.0)
        .collect();
    Ok(System::new_unchecked(t.scenario().clone(), table))
}

/// The maximally mixed system on a scenario: every output string equally
/// likely for every input.
pub fn uniform_system(scenario: Scenario) -> Result<System, SystemError> {
    let cells = scenario.cells();
    if cells > crate::system::TABLE_CELL_CAP as u128 {
        return Err(SystemError::TableTooLarge {
            cells,
            cap: crate::system::TABLE_CELL_CAP,
        });
    }
    let p = 1.0 / scenario.joint_outputs() as f64;
    let table = vec![p; cells as usize];
    Ok(System::new_unchecked(scenario, table))
}
