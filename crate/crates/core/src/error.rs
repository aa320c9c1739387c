/// Errors produced while constructing or transforming systems.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SystemError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("table has {got} entries but the scenario requires {want}")]
    TableLength { got: usize, want: usize },

    #[error("table too large: {cells} cells exceed the dense cap of {cap}")]
    TableTooLarge { cells: u128, cap: usize },

    #[error("table entry {index} = {value} lies outside [0, 1] beyond tol={tol}")]
    EntryOutOfRange { index: usize, value: f64, tol: f64 },

    #[error("outputs for joint input {input} sum to {sum}, expected 1 within tol={tol}")]
    NotNormalized { input: usize, sum: f64, tol: f64 },

    #[error("expected {expected}, got a {got} scenario")]
    ShapeMismatch { expected: &'static str, got: String },

    #[error("parameter {name} = {value} outside its valid range {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error(
        "conditioning on a zero-probability outcome: party {party}, input {input}, output {output}"
    )]
    DegenerateConditioning {
        party: usize,
        input: usize,
        output: usize,
    },

    #[error("bit function table has {got} entries, domain requires {want}")]
    BitFunctionLength { got: usize, want: usize },

    #[error("bit function value {value} at index {index} is not a bit")]
    BitFunctionValue { index: usize, value: u8 },

    #[error("party index {party} out of range for {parties} parties")]
    PartyOutOfRange { party: usize, parties: usize },

    #[error("party grouping invalid: {0}")]
    InvalidGrouping(String),

    #[error("enumeration of {count} deterministic vertices exceeds the cap of {cap}")]
    VertexCapExceeded { count: u128, cap: usize },

    #[error("non-finite table entry at index {index}")]
    NonFinite { index: usize },

    #[error("json: {0}")]
    Json(String),
}
