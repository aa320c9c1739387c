use nlst_core::SystemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImpossibleError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("{what} handles n ≤ {cap}, got n = {n}")]
    SizeCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("outside the valid parameter regime: {0}")]
    OutOfRegime(String),
}
