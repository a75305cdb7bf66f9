//! Planning and verification of local-conjugation schedules for a
//! complete σz⊗σz drift Hamiltonian.

pub mod config;
pub mod graphops;
pub mod linalg;
pub mod model;
pub mod planner;
pub mod verifier;

pub use config::Config;
pub use model::*;
