//! Single-shot error correction simulator.
//!
//! The crate is organized around the pipeline of a single-shot experiment:
//!
//! - [`bits`] / [`pauli`]: binary-symplectic Pauli algebra, subsystem codes,
//!   syndromes and the canonical error decomposition.
//! - [`channel`]: Pauli channels, locality classes and the channel-algebra
//!   identities used to reason about composed noise.
//! - [`matching`]: exact minimum-weight perfect matching and T-joins.
//! - [`rep2d`]: the 2D Ising/repetition code demonstration of single-shot
//!   correction with noisy check measurements.
//! - [`colex`]: 3-colex construction and the derived gauge color codes.
//! - [`gcc`]: gauge syndrome extraction, color-flux repair, charge-matching
//!   decoding and gauge fixing for 3D gauge color codes.
//! - [`oracle`]: independent exhaustive oracles used by the test suites.
//! - [`harness`]: seeded Monte Carlo experiments, cluster statistics and
//!   confinement fits, plus CSV/JSON/SVG outputs.

pub mod bits;
pub mod channel;
pub mod colex;
pub mod gcc;
pub mod harness;
pub mod matching;
pub mod oracle;
pub mod pauli;
pub mod rep2d;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("correction table has no entry for syndrome {0}")]
    IncompleteTable(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("non-syndrome event: {0}")]
    NonSyndromeEvent(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
