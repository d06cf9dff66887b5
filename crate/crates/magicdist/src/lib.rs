//! Exact and floating-point machinery for studying single-qubit state
//! distillation by stabilizer operations.
//!
//! The crate is organised around a few cooperating layers:
//!
//! * [`pauli`]: signed Pauli operators in the symplectic bit representation,
//!   with exact multiplication and commutation.
//! * [`coeffs`]: states as Pauli coefficient vectors, either exact
//!   (`BigRational`) or floating point, plus dense density matrices and
//!   validity certificates.
//! * [`stabilizer`]: enumeration of stabilizer groups, stabilizer states and
//!   n-to-one-qubit reductions, together with closed-form counts.
//! * [`clifford`]: extensional Clifford groups (signed Pauli permutations)
//!   for one and two qubits.
//! * [`polytope`]: membership of a state in the convex hull of stabilizer
//!   states, decided by an exact rational simplex with replayable
//!   certificates, plus the face census of the two-qubit hull.
//! * [`reductions`]: applying a reduction to a coefficient vector by coset
//!   averaging, counterexample reports, and exhaustive searches over all
//!   reductions (parallel, checkpointable).
//! * [`maps`]: closed-form distillation maps on the Bloch sphere, region
//!   predicates, iteration helpers and boundary bisection.
//! * [`thresholds`]: noise models for the pi/8 gate, the Choi-state parity
//!   construction and threshold searches.
//! * [`oracle`]: a dense density-matrix engine used as an independent check
//!   of every closed form above.
//! * [`data`]: the embedded tables (counterexample states, hull faces, code
//!   generators) with a content checksum.
//! * [`verify`]: the named end-to-end checks driven by the CLI and the
//!   acceptance test suite.
//!
//! Conventions used throughout: Pauli labels are strings like `"IX"` with the
//! first character acting on qubit 0; coefficient vectors are indexed by
//! `(x_bits << n) | z_bits`; a state has coefficient `1/2^n` on the identity;
//! halfspaces are satisfied when the inner product with the coefficient
//! vector is `<= 0`.

pub mod clifford;
pub mod coeffs;
pub mod data;
pub mod maps;
pub mod oracle;
pub mod pauli;
pub mod polytope;
pub mod rat;
pub mod reductions;
pub mod stabilizer;
pub mod thresholds;
pub mod verify;

pub use coeffs::{DensityMatrix, PauliCoefficients};
pub use maps::BlochVector;
pub use pauli::PauliOperator;
pub use rat::Rat;
pub use stabilizer::StabilizerGroup;

use thiserror::Error;

/// Errors surfaced by fallible operations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pauli label: {0}")]
    BadLabel(String),
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },
    #[error("qubit count {0} exceeds supported limit {1}")]
    QubitLimit(usize, usize),
    #[error("not a valid state: {0}")]
    InvalidState(String),
    #[error("generators are not an independent commuting set: {0}")]
    InvalidGroup(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("no mixing weight reaches a nice angle with slack: {0}")]
    NoNiceAngle(String),
    #[error("criterion is not monotone over the bracket: {0}")]
    NotMonotone(String),
    #[error("bracket does not straddle a sign change: {0}")]
    BadBracket(String),
    #[error("bad table entry: {0}")]
    BadTableEntry(String),
    #[error("checkpoint rejected: {0}")]
    BadCheckpoint(String),
    #[error("certificate failed re-verification: {0}")]
    BadCertificate(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
