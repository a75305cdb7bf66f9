//! Schedule synthesis and overhead bounds.

mod bounds;
mod circuits;
mod lp;
mod schedules;
mod two_qubit;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::ModelError;
use crate::verifier::VerifyError;

pub use bounds::{
    bounds_report, inversion_lower_bound, majorization_feasibility, spectral_lower_bound, spectral_lower_bound_j,
    weyl_bound,
};
pub use circuits::{
    circuit_step_plan, compile_parallel_circuit, gate_angle, gate_generator, is_local_gate, pauli_decompose,
    weighted_depth, StepPlan,
};
pub use lp::{optimal_zz_plan, pair_rows, pattern_index, pattern_signs, LpSolution, LpStatus, MAX_PIVOTS};
pub use schedules::{
    chromatic_schedule, clique_schedule, clique_walsh_schedule, hadamard_schedule, merge_patterns, rank_one_schedule,
};
pub use two_qubit::{
    extraction_scale, invert_plan, invert_plan_general, two_qubit_plan, zz_extraction_plan, InversionPlan,
    TwoQubitPlan, ZzExtraction,
};

/// Durations at or below this are dropped from emitted schedules.
pub const PRUNE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("{n} qubits exceeds the planning cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex pivot limit reached before a feasible point was found")]
    IterationCap,
    #[error("basis matrix is singular")]
    Singular,
    #[error("{0}")]
    InvalidInput(String),
    #[error(
        "drift is not bipartite (odd cycle {}); plan the inversion with the LP on the negated drift instead",
        .cycle.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join("-")
    )]
    NotBipartite { cycle: Vec<usize> },
    #[error("drift has no interactions")]
    EmptyDrift,
    #[error("bounds are inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
