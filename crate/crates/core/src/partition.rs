use crate::error::SystemError;
use crate::system::System;

/// A convex decomposition P = Σ_z p(z)·Pᶻ of a parent system into
/// non-signalling parts: the finest information an outside party holding z
/// can have without signalling to the insiders.
#[derive(Debug, Clone, PartialEq)]
pub struct NSPartition {
    pub elements: Vec<(f64, System)>,
}

/// Validation report for a partition against its parent system.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionCheck {
    pub ok: bool,
    /// |Σ weights − 1|
    pub weight_residual: f64,
    /// max over cells of |Σ w·Pᶻ − P|
    pub mixture_residual: f64,
    /// worst non-signalling residual over all elements
    pub ns_residual: f64,
}

impl NSPartition {
    pub fn new(elements: Vec<(f64, System)>) -> Self {
        NSPartition { elements }
    }

    /// Check all partition invariants against `parent` within `tol`:
    /// nonnegative weights summing to one, the weighted mixture
    /// reproducing the parent table cell by cell, and every element
    /// non-signalling.
    pub fn validate(&self, parent: &System, tol: f64) -> Result<PartitionCheck, SystemError> {
        if self.elements.is_empty() {
            return Err(SystemError::InvalidScenario(
                "partition has no elements".into(),
            ));
        }
        for (w, sys) in &self.elements {
            if sys.scenario() != parent.scenario() {
                return Err(parent.scenario().shape_error("matching element scenario"));
            }
            if !w.is_finite() || *w < -tol {
                return Err(SystemError::Domain {
                    name: "partition weight",
                    value: *w,
                    range: "[0, 1]",
                });
            }
        }
        let weight_sum: f64 = self.elements.iter().map(|(w, _)| w).sum();
        let weight_residual = (weight_sum - 1.0).abs();

        let mut mixture_residual = 0.0f64;
        for (idx, &p) in parent.table().iter().enumerate() {
            let mix: f64 = self.elements.iter().map(|(w, s)| w * s.table()[idx]).sum();
            mixture_residual = mixture_residual.max((mix - p).abs());
        }

        let mut ns_residual = 0.0f64;
        for (_, sys) in &self.elements {
            ns_residual = ns_residual.max(sys.is_nonsignalling(tol).worst_residual);
        }

        Ok(PartitionCheck {
            ok: weight_residual <= tol && mixture_residual <= tol && ns_residual <= tol,
            weight_residual,
            mixture_residual,
            ns_residual,
        })
    }
}
