use crate::linalg::complex::{pauli, CMatrix, C64};
use crate::linalg::eigen::sym_eig;
use crate::linalg::matrix::{mat3_mul, mat3_transpose, Matrix};
use crate::linalg::rotation::su2_to_so3;
use crate::model::{graph_to_jmatrix, ConjugationSchedule, JMatrix, PairMatrix, SignSchedule, WeightedGraph};

use super::VerifyError;

/// Effective zz weights of a sign schedule: `w_kl · Σ_j τ_j s_jk s_jl`.
///
/// Durations are grouped by the sign product before subtraction, so a pair
/// that the schedule decouples comes out as an exact zero and is omitted.
pub fn average_zz(s: &SignSchedule, drift: &WeightedGraph) -> Result<WeightedGraph, VerifyError> {
    if s.n != drift.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n,
            other: drift.n(),
        });
    }
    let mut edges = Vec::new();
    for e in drift.edges() {
        let (mut plus, mut minus) = (0.0, 0.0);
        for iv in &s.intervals {
            if iv.signs[e.k] * iv.signs[e.l] > 0 {
                plus += iv.duration;
            } else {
                minus += iv.duration;
            }
        }
        let w = e.w * (plus - minus);
        if w != 0.0 {
            edges.push((e.k, e.l, w));
        }
    }
    Ok(WeightedGraph::new(drift.n(), edges).expect("subgraph of a valid drift"))
}

/// `Σ_j τ_j (conjugated drift)` for a sign schedule, as a J-matrix.
pub fn average_hamiltonian(s: &SignSchedule, drift: &WeightedGraph) -> Result<JMatrix, VerifyError> {
    average_zz(s, drift).map(|g| graph_to_jmatrix(&g))
}

/// `Σ_j τ_j Σ_{k<l} R_k D_kl R_lᵀ`, with `R` the adjoint rotation of each frame.
pub fn average_hamiltonian_frames(s: &ConjugationSchedule, drift: &JMatrix) -> Result<JMatrix, VerifyError> {
    if s.n != drift.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n,
            other: drift.n(),
        });
    }
    let mut out = JMatrix::zeros(s.n);
    for iv in &s.intervals {
        let rot: Vec<_> = iv.frame.0.iter().map(su2_to_so3).collect();
        for ((k, l), d) in drift.blocks() {
            let b = mat3_mul(&mat3_mul(&rot[k], &d.0), &mat3_transpose(&rot[l]));
            out.accumulate(k, l, &PairMatrix(b).scaled(iv.duration));
        }
    }
    Ok(out)
}

/// The 4x4 Hermitian `Σ J_αβ σ_α⊗σ_β + a·σ⊗I + I⊗b·σ`.
pub fn pair_hamiltonian(pair: &PairMatrix, locals: Option<([f64; 3], [f64; 3])>) -> CMatrix {
    let id = CMatrix::identity(2);
    let mut h = CMatrix::zeros(4, 4);
    for a in 0..3 {
        for b in 0..3 {
            let j = pair.0[a][b];
            if j != 0.0 {
                h = h.add(&pauli(a).kron(&pauli(b)).scale(C64::new(j, 0.0)));
            }
        }
    }
    if let Some((left, right)) = locals {
        for a in 0..3 {
            h = h.add(&pauli(a).kron(&id).scale(C64::new(left[a], 0.0)));
            h = h.add(&id.kron(&pauli(a)).scale(C64::new(right[a], 0.0)));
        }
    }
    h
}

/// Operator norm of a pair term, from the spectrum of the real 8x8 embedding
/// `[[Re H, −Im H], [Im H, Re H]]`.
pub fn pair_norm(pair: &PairMatrix, locals: Option<([f64; 3], [f64; 3])>) -> f64 {
    let h = pair_hamiltonian(pair, locals);
    let real = Matrix::from_fn(8, 8, |i, j| {
        let z = h[(i % 4, j % 4)];
        match (i < 4, j < 4) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let spec = sym_eig(&real, 1e-14).expect("pair Hamiltonian embedding is symmetric");
    spec.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
