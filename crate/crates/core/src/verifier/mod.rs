//! Independent oracles for schedules and bounds.

mod average;
mod certificate;
mod simulate;

use serde::Serialize;
use thiserror::Error;

use crate::config::Config;
use crate::linalg::majorization::is_psd;
use crate::linalg::LinalgError;
use crate::model::{graph_to_jmatrix, JMatrix, ModelError, Schedule, WeightedGraph};

pub use average::{average_hamiltonian, average_hamiltonian_frames, average_zz, pair_hamiltonian, pair_norm};
pub use certificate::{normalized_correlation, product_certificate, Certificate, CertificateSummary};
pub use simulate::{
    frame_schedule_unitary, hamiltonian, schedule_unitary, sign_schedule_unitary, trotter_scaling, unitary_distance,
    unitary_of, zz_energies, TrotterScaling,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("schedule acts on {schedule} qubits but the Hamiltonian has {other}")]
    DimensionMismatch { schedule: usize, other: usize },
    #[error("{n} qubits exceeds the simulation cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("schedule has zero overhead")]
    ZeroOverhead,
    #[error("invalid epsilon sequence: {0}")]
    BadEpsilons(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub epsilon: f64,
    pub steps: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { epsilon: 0.1, steps: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mu: f64,
    pub avg_hamiltonian_error: f64,
    pub unitary_error: Option<f64>,
    pub trotter_ratio: Option<f64>,
    pub psd_ok: bool,
    /// Average Hamiltonian differs from the target by more than the tolerance.
    pub mismatch: bool,
    pub notes: Vec<String>,
}

/// Effective J-matrix of any schedule over a J-matrix drift.
pub fn effective_hamiltonian(s: &Schedule, drift: &JMatrix) -> Result<JMatrix, VerifyError> {
    match s {
        Schedule::Signs(signs) if drift.is_pure_zz() => average_hamiltonian(signs, &drift.zz_graph()),
        other => average_hamiltonian_frames(&other.to_conjugation(), drift),
    }
}

/// Checks a schedule against a target: average Hamiltonian (always), the
/// PSD condition on `(1/μ) J + I` for zz targets, and unitary-level errors
/// when the register fits the simulation caps.
pub fn verify(
    s: &Schedule,
    drift: &JMatrix,
    target: &JMatrix,
    opts: &VerifyOptions,
    cfg: &Config,
) -> Result<VerificationReport, VerifyError> {
    if s.n() != target.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n(),
            other: target.n(),
        });
    }
    let mu = s.overhead();
    let avg = effective_hamiltonian(s, drift)?;
    let avg_hamiltonian_error = avg.max_abs_diff(target);
    let mut notes = Vec::new();

    let psd_ok = if mu > 0.0 {
        let dense = target.to_dense().scale(1.0 / mu);
        is_psd(&dense.add(&crate::linalg::Matrix::identity(3 * target.n())), cfg.tol)?
    } else {
        target.blocks().all(|(_, b)| b.is_zero())
    };

    let fields = match s {
        Schedule::Frames(f) => f.local_fields.clone(),
        Schedule::Signs(_) => None,
    };
    let mut unitary_error = None;
    let mut trotter_ratio = None;
    let eps = opts.epsilon;
    let run = || -> Result<(f64, f64), VerifyError> {
        let e1 = unitary_distance(
            &schedule_unitary(s, drift, eps, opts.steps, cfg)?,
            &unitary_of(target, fields.as_deref(), eps, cfg)?,
        );
        let e2 = unitary_distance(
            &schedule_unitary(s, drift, eps / 2.0, opts.steps, cfg)?,
            &unitary_of(target, fields.as_deref(), eps / 2.0, cfg)?,
        );
        Ok((e1, e2))
    };
    match run() {
        Ok((e1, e2)) => {
            unitary_error = Some(e1);
            if e1 > 1e-12 || e2 > 1e-12 {
                trotter_ratio = Some(e1 / e2);
            }
        }
        Err(VerifyError::CapExceeded { n, cap }) => {
            notes.push(format!("unitary checks skipped: {n} qubits exceeds cap {cap}"));
        }
        Err(e) => return Err(e),
    }

    Ok(VerificationReport {
        mu,
        avg_hamiltonian_error,
        unitary_error,
        trotter_ratio,
        psd_ok,
        mismatch: avg_hamiltonian_error > cfg.tol,
        notes,
    })
}

/// [`verify`] for a zz target against a zz drift.
pub fn verify_zz(
    s: &Schedule,
    drift: &WeightedGraph,
    target: &WeightedGraph,
    opts: &VerifyOptions,
    cfg: &Config,
) -> Result<VerificationReport, VerifyError> {
    verify(s, &graph_to_jmatrix(drift), &graph_to_jmatrix(target), opts, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SignSchedule;

    #[test]
    fn star_schedule_verifies() {
        let star = WeightedGraph::from_one_based(5, (2..=5).map(|l| (1, l, 1.0))).unwrap();
        let s =
            SignSchedule::from_strings(5, &[("++++-", 0.5), ("+++-+", 0.5), ("++-++", 0.5), ("+-+++", 0.5)]).unwrap();
        let avg = average_zz(&s, &WeightedGraph::complete(5)).unwrap();
        assert!((avg.weight(1, 2)).abs() < 1e-15);
        assert!((avg.weight(0, 1) - 1.0).abs() < 1e-15);
        let report = verify_zz(
            &Schedule::Signs(s),
            &WeightedGraph::complete(5),
            &star,
            &VerifyOptions::default(),
            &Config::default(),
        )
        .unwrap();
        assert!(!report.mismatch);
        assert!(report.psd_ok);
        assert!(report.unitary_error.unwrap() < 1e-12);
        assert_eq!(report.trotter_ratio, None);
    }

    #[test]
    fn tampered_duration_is_flagged() {
        let s = SignSchedule::from_strings(3, &[("+++", 1.1)]).unwrap();
        let report = verify_zz(
            &Schedule::Signs(s),
            &WeightedGraph::complete(3),
            &WeightedGraph::complete(3),
            &VerifyOptions::default(),
            &Config::default(),
        )
        .unwrap();
        assert!(report.mismatch);
        assert!((report.avg_hamiltonian_error - 0.1).abs() < 1e-12);
    }
}
