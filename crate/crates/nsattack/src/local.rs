//! Local part: the largest weight of a convex mixture of local
//! deterministic vertices that fits under a system entrywise. The
//! remainder (sys − mixture)/(1−p) is automatically nonsignaling, so p is
//! exactly the maximal local weight in any nonsignaling decomposition.
//!
//! The program is   max Σ_L q_L   s.t.   Σ_L q_L·D_L ≤ sys,  q ≥ 0,
//! solved in standard form with one slack per cell. Vertex columns are
//! generated on demand, so scenarios with tens of thousands of vertices
//! (two boxes: 65 536) never materialize a constraint matrix.

use crate::error::AttackError;
use nlst_core::vertices::{vertex_cells, vertex_count};
use nlst_core::{Scenario, System, SystemError};
use nlst_optkernel::{solve_with_column_generation, ColumnSource, StandardStatus};
use std::cell::RefCell;

/// Optimal local weight and the mixture that attains it.
#[derive(Debug, Clone)]
pub struct LocalPart {
    pub value: f64,
    /// Nonzero weights as (vertex index, weight); vertex indices follow
    /// the canonical strategy encoding (first party slowest).
    pub components: Vec<(usize, f64)>,
}

impl LocalPart {
    /// Materialize the mixture as systems.
    pub fn component_systems(&self, scenario: &Scenario) -> Vec<(f64, System)> {
        let mut cells = Vec::new();
        self.components
            .iter()
            .map(|&(j, w)| {
                vertex_cells(scenario, j as u128, &mut cells);
                let mut table = vec![0.0; scenario.cells() as usize];
                for &c in &cells {
                    table[c] = 1.0;
                }
                (w, System::new_unchecked(scenario.clone(), table))
            })
            .collect()
    }
}

/// Cap on precomputed vertex-cell entries (stride × vertex count). Every
/// generation round prices every vertex, so decoding each strategy once up
/// front — 4 MB for two boxes — beats re-deriving it thousands of times;
/// past the cap columns are decoded on demand instead.
const CELL_CACHE_CAP: usize = 1 << 22;

struct VertexColumns {
    scenario: Scenario,
    nverts: usize,
    cells: usize,
    /// cells hit by each vertex, `stride` consecutive entries per vertex
    cache: Option<Vec<u32>>,
    stride: usize,
    buf: RefCell<Vec<usize>>,
}

impl VertexColumns {
    fn new(scenario: Scenario, nverts: usize) -> Self {
        let cells = scenario.cells() as usize;
        let stride = scenario.joint_inputs();
        let cache = nverts.checked_mul(stride).and_then(|total| {
            if total > CELL_CACHE_CAP {
                return None;
            }
            let mut flat = Vec::with_capacity(total);
            let mut buf = Vec::new();
            for j in 0..nverts {
                vertex_cells(&scenario, j as u128, &mut buf);
                flat.extend(buf.iter().map(|&c| c as u32));
            }
            Some(flat)
        });
        VertexColumns {
            scenario,
            nverts,
            cells,
            cache,
            stride,
            buf: RefCell::new(Vec::new()),
        }
    }
}

impl ColumnSource for VertexColumns {
    fn nrows(&self) -> usize {
        self.cells
    }
    fn ncols(&self) -> usize {
        self.nverts + self.cells
    }
    fn cost(&self, j: usize) -> f64 {
        if j < self.nverts {
            -1.0
        } else {
            0.0
        }
    }
    fn column(&self, j: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        if j >= self.nverts {
            out.push((j - self.nverts, 1.0));
        } else if let Some(flat) = &self.cache {
            let hits = &flat[j * self.stride..(j + 1) * self.stride];
            out.extend(hits.iter().map(|&c| (c as usize, 1.0)));
        } else {
            let mut buf = self.buf.borrow_mut();
            vertex_cells(&self.scenario, j as u128, &mut buf);
            out.extend(buf.iter().map(|&c| (c, 1.0)));
        }
    }
}

/// Compute the local part of a system, enumerating at most `vertex_cap`
/// local deterministic vertices.
pub fn local_part(sys: &System, vertex_cap: usize) -> Result<LocalPart, AttackError> {
    let scenario = sys.scenario().clone();
    let count = vertex_count(&scenario);
    if count > vertex_cap as u128 {
        return Err(AttackError::System(SystemError::VertexCapExceeded {
            count,
            cap: vertex_cap,
        }));
    }
    let nverts = count as usize;
    let src = VertexColumns::new(scenario, nverts);
    // the vertex set is exponentially wide (4⁴ per composite side for two
    // boxes already), so generate columns on demand starting from the
    // slacks — the all-slack basis is feasible outright
    let slacks: Vec<usize> = (nverts..nverts + src.cells).collect();
    let sol = solve_with_column_generation(&src, sys.table(), &slacks, 64, 1e-10)?;
    if sol.status != StandardStatus::Optimal {
        return Err(AttackError::SolverStatus(format!("{:?}", sol.status)));
    }
    let components: Vec<(usize, f64)> = sol.x[..nverts]
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 1e-12)
        .map(|(j, &w)| (j, w))
        .collect();
    Ok(LocalPart {
        value: -sol.value,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlst_core::builders::{pr_box, unbiased_pr_box};

    #[test]
    fn symmetric_box_local_part_is_four_eps() {
        for &eps in &[0.05, 0.1, 0.2] {
            let sys = unbiased_pr_box(eps).unwrap();
            let lp = local_part(&sys, 1 << 20).unwrap();
            assert!(
                (lp.value - 4.0 * eps).abs() < 1e-9,
                "eps {eps}: {}",
                lp.value
            );
        }
    }

    #[test]
    fn pr_box_has_no_local_part() {
        let lp = local_part(&pr_box(), 1 << 20).unwrap();
        assert!(lp.value.abs() < 1e-10, "{}", lp.value);
        assert!(lp.components.is_empty());
    }

    #[test]
    fn mixture_fits_under_the_parent_and_sums_to_the_value() {
        let sys = unbiased_pr_box(0.1).unwrap();
        let lp = local_part(&sys, 1 << 20).unwrap();
        let parts = lp.component_systems(sys.scenario());
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        assert!((total - lp.value).abs() < 1e-9);
        let mut mix = vec![0.0; sys.table().len()];
        for (w, s) in &parts {
            for (m, v) in mix.iter_mut().zip(s.table()) {
                *m += w * v;
            }
        }
        for (m, p) in mix.iter().zip(sys.table()) {
            assert!(*m <= p + 1e-9, "{m} > {p}");
        }
    }

    #[test]
    fn vertex_cap_respected() {
        let sys = unbiased_pr_box(0.1).unwrap();
        assert!(matches!(
            local_part(&sys, 8),
            Err(AttackError::System(SystemError::VertexCapExceeded { .. }))
        ));
    }
}
