//! Attacks on nonsignaling systems through linear programming.
//!
//! The central quantity is the distance from uniform of a bit guessed
//! from one party's output: an adversary holding a nonsignaling box can
//! bias the bit by preparing a partition of the box, and the best bias is
//! the optimum of an explicit linear program over signed tables. This
//! crate builds those programs, solves them, extracts the attack as a
//! partition witness, and certifies optimality with dual vectors that
//! tensor across independent systems.
//!
//! The modules:
//! - [`matrix`]: the nonsignaling constraint matrix of a scenario.
//! - [`program`]: the distance program in standard form and its dual
//!   certificates.
//! - [`distance`]: solve the program, reconstruct the partition witness,
//!   and certify the optimum.
//! - [`partition`]: closed-form single-box partitions for the unbiased
//!   noisy box family, and the partition membership test.
//! - [`local`]: the maximal local part of a system via column-generation
//!   over deterministic vertices.
//! - [`product`]: tensored dual certificates bounding attacks on the XOR
//!   of bits drawn from many systems.

pub mod distance;
pub mod error;
pub mod local;
pub mod matrix;
pub mod partition;
pub mod product;
pub mod program;

pub use distance::{distance_from_uniform_lp, AttackResult};
pub use error::AttackError;
pub use local::{local_part, LocalPart};
pub use matrix::{build_ns_constraint_matrix, ns_constraint_count};
pub use partition::{is_partition_element, optimal_single_box_partition};
pub use product::{tensor_dual, xor_bound, ProductDual};
pub use program::{
    chsh_identity_certificate, dual_event_decomposition, CertificateCheck, DistanceProgram,
    DualCertificate, DualEvent,
};
