//! Dense state-vector simulation and compilation for qudit measurement-based
//! quantum computation on cluster states.

pub mod algorithms;
pub mod cluster;
pub mod clifford;
pub mod error;
pub mod frame;
pub mod identities;
pub mod math;
pub mod mub;
pub mod state;
pub mod teleport;

pub use error::{Error, Result};
pub use state::StateVector;
