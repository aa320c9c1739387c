use thiserror::Error;

/// Hard failures of the optimization kernel. Solver outcomes that are
/// answers rather than failures (infeasible, unbounded, iteration cap)
/// travel in the solution statuses, not here.
#[derive(Debug, Clone, Error)]
pub enum KernelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {what} at position {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("singular matrix during {what} (pivot {pivot:.3e})")]
    Singular { what: &'static str, pivot: f64 },

    #[error("numerical failure in {what}: residual {residual:.3e} exceeds {limit:.3e}")]
    Numerical {
        what: &'static str,
        residual: f64,
        limit: f64,
    },
}
