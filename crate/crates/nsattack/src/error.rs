use nlst_core::SystemError;
use nlst_optkernel::KernelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("input {index} out of range for party {party}")]
    InputOutOfRange { party: usize, index: usize },
    #[error("system violates nonsignaling (worst residual {0:.3e})")]
    NotNonsignaling(f64),
    #[error("outside the valid parameter regime: {0}")]
    OutOfRegime(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("dual certificate infeasible (worst residual {residual:.3e})")]
    InfeasibleCertificate { residual: f64 },
    #[error("linear program did not reach an optimum: {0}")]
    SolverStatus(String),
}
