//! Finite-alphabet multi-party input/output systems ("boxes").
//!
//! A system is a conditional probability table P(x⃗|u⃗) over per-party
//! input and output alphabets, stored dense in one fixed flattening
//! convention (see [`Scenario`]). This crate provides validated
//! construction, the non-signalling check, Bell-type functionals,
//! standard example boxes, product/marginal/conditioning transforms,
//! depolarization, local deterministic vertices, and seeded randomness.
//! Everything downstream — attack LPs, moment-matrix relaxations, key-rate
//! estimates — consumes these types.

pub mod bell;
pub mod bitfn;
pub mod builders;
pub mod depolarize;
pub mod error;
pub mod partition;
pub mod rng;
pub mod scenario;
pub mod system;
pub mod transform;
pub mod vertices;

pub use bell::{braunstein_caves_value, chsh_value};
pub use bitfn::BitFunction;
pub use builders::{noisy_singlet_system, pr_box, tsirelson_system, unbiased_pr_box, uniform_system};
pub use depolarize::{depolarize, depolarize_expectation, symmetry_map, SYMMETRY_MAP_COUNT};
pub use error::SystemError;
pub use partition::{NSPartition, PartitionCheck};
pub use rng::{child_seed, rng_from_seed, DefaultRng};
pub use scenario::Scenario;
pub use system::{
    for_each_ns_constraint, NsCheck, NsConstraint, NsViolation, SubnormalizedSystem, System,
    DEFAULT_TOL, TABLE_CELL_CAP,
};
pub use transform::{condition, group_parties, marginal, tensor};
pub use vertices::{
    deterministic_system, local_deterministic_vertices, vertex_cells, vertex_count, VertexIter,
};
