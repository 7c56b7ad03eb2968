//! Continuous-time multi-object quantum search over weighted information
//! sets.
//!
//! The crate prepares the weighted initial superposition, evolves it in
//! closed form on the two-dimensional invariant plane, cross-checks that
//! evolution against brute-force diagonalization of the full Hamiltonian,
//! estimates the overlap `y` by phase estimation and checks the runtime
//! bounds that follow from `y`.

pub mod efficiency;
pub mod error;
pub mod full_sim;
pub mod phase;
pub mod reduced;
pub mod rng;
pub mod scenario;
pub mod state_prep;

pub use error::{Result, SearchError};
pub use reduced::{Mat2, ReducedState};
pub use scenario::{Confidence, ConfidenceReport, InformationSet, Oracle, SearchScenario};
pub use state_prep::{uniform_superposition, weighted_superposition, StatePrep};

/// Version tag written into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;
