use std::f64::consts::PI;

use crate::config::Config;
use crate::graphops::{chromatic_index, weighted_chromatic_index};
use crate::linalg::complex::{pauli, CMatrix, C64, ONE};
use crate::linalg::eigen::{expm_i_hermitian, unitary_eig};
use crate::linalg::rotation::Su2;
use crate::model::{
    Circuit, ConjugationSchedule, FrameInterval, Gate, JMatrix, LocalFrame, PairMatrix, Validate, WeightedGraph,
};
use crate::verifier::{pair_hamiltonian, pair_norm};

use super::two_qubit::two_qubit_plan;
use super::{PlanError, PRUNE};

const UNITARY_TOL: f64 = 1e-9;

fn check_gate(u: &CMatrix) -> Result<(), PlanError> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(PlanError::InvalidInput("gate must be 4x4".into()));
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(PlanError::InvalidInput(format!(
            "gate is not unitary (defect {defect:.3e})"
        )));
    }
    if (u.det() - ONE).norm() > 1e-8 {
        return Err(PlanError::InvalidInput("gate determinant is not 1".into()));
    }
    Ok(())
}

/// Minimal-norm traceless generator `H` with `exp(iH) = u`, and its norm.
///
/// Eigenphases are shifted by `2π m_j`, `m_j ∈ [−2, 2]`, keeping the sum zero
/// and minimising the largest magnitude.
pub fn gate_generator(u: &CMatrix) -> Result<(CMatrix, f64), PlanError> {
    check_gate(u)?;
    let eig = unitary_eig(u, UNITARY_TOL)?;
    let theta = &eig.phases;
    let mut best: Option<(f64, [i32; 4])> = None;
    for code in 0..625i32 {
        let m = [code % 5, code / 5 % 5, code / 25 % 5, code / 125].map(|x| x - 2);
        let shifted: Vec<f64> = (0..4).map(|j| theta[j] + 2.0 * PI * f64::from(m[j])).collect();
        if shifted.iter().sum::<f64>().abs() > 1e-6 {
            continue;
        }
        let worst = shifted.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        if best.is_none_or(|(b, _)| worst < b - 1e-12) {
            best = Some((worst, m));
        }
    }
    let (angle, m) = best.ok_or_else(|| PlanError::InvalidInput("no traceless branch found".into()))?;
    let diag: Vec<C64> = (0..4)
        .map(|j| C64::new(theta[j] + 2.0 * PI * f64::from(m[j]), 0.0))
        .collect();
    let v = &eig.vectors;
    let h = v.matmul(&CMatrix::from_diag(&diag)).matmul(&v.adjoint());
    let h = CMatrix::from_fn(4, 4, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    Ok((h, angle))
}

/// Smallest operator norm of a Hermitian traceless generator of `u`.
pub fn gate_angle(u: &CMatrix) -> Result<f64, PlanError> {
    gate_generator(u).map(|(_, a)| a)
}

/// Pauli coefficients of a two-qubit Hermitian operator: pair matrix and the
/// local fields on the first and second qubit.
pub fn pauli_decompose(h: &CMatrix) -> (PairMatrix, [f64; 3], [f64; 3]) {
    let id = CMatrix::identity(2);
    let coeff = |op: CMatrix| h.matmul(&op).trace().re / 4.0;
    let mut j = [[0.0; 3]; 3];
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    for x in 0..3 {
        for y in 0..3 {
            j[x][y] = coeff(pauli(x).kron(&pauli(y)));
        }
        a[x] = coeff(pauli(x).kron(&id));
        b[x] = coeff(id.kron(&pauli(x)));
    }
    (PairMatrix(j), a, b)
}

/// A 4x4 unitary is a product of one-qubit gates iff its realignment
/// `R[(i₁ j₁), (i₂ j₂)] = U[(i₁ i₂), (j₁ j₂)]` has rank one.
pub fn is_local_gate(u: &CMatrix) -> bool {
    let r = CMatrix::from_fn(4, 4, |row, col| {
        let (i1, j1) = (row / 2, row % 2);
        let (i2, j2) = (col / 2, col % 2);
        u[(2 * i1 + i2, 2 * j1 + j2)]
    });
    let (mut pr, mut pc, mut big) = (0, 0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            if r[(i, j)].norm() > big {
                big = r[(i, j)].norm();
                pr = i;
                pc = j;
            }
        }
    }
    if big == 0.0 {
        return false;
    }
    let p = r[(pr, pc)];
    (0..4).all(|i| (0..4).all(|j| (r[(i, j)] - r[(i, pc)] * r[(pr, j)] / p).norm() <= 1e-9))
}

/// `Σ_steps max angle`, skipping products of one-qubit gates.
pub fn weighted_depth(c: &Circuit) -> Result<f64, PlanError> {
    c.validate()?;
    let mut total = 0.0;
    for step in &c.steps {
        let mut worst = 0.0_f64;
        for g in step {
            if !is_local_gate(&g.unitary) {
                worst = worst.max(gate_angle(&g.unitary)?);
            }
        }
        total += worst;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepPlan {
    pub schedule: ConjugationSchedule,
    pub mu: f64,
    /// Nonlocal part of `Σ H_kl` that the schedule reproduces.
    pub target: JMatrix,
}

/// Plans one circuit step on `n` qubits against the complete zz drift.
///
/// Each gate's minimal generator is planned as a two-qubit canonical
/// schedule. The per-pair timelines run in parallel: at every breakpoint
/// segment, pairs still running form 2-cliques, all other qubits are
/// singletons, and Hadamard sign rows over these cliques decouple
/// everything across cliques.
pub fn circuit_step_plan(n: usize, step: &[Gate]) -> Result<StepPlan, PlanError> {
    Circuit::new(n, vec![step.to_vec()])?;
    let mut target = JMatrix::zeros(n);
    let mut fields = vec![[0.0; 3]; n];
    let mut timelines = Vec::with_capacity(step.len());
    for g in step {
        let (k, l) = g.pair;
        let (h, _) = gate_generator(&g.unitary)?;
        let (j, a, b) = pauli_decompose(&h);
        let plan = two_qubit_plan(&j, None)?;
        target.accumulate(k, l, &j);
        for x in 0..3 {
            fields[k][x] += a[x];
            fields[l][x] += b[x];
        }
        timelines.push(((k, l), plan.schedule.intervals));
    }

    let mut cuts = vec![0.0];
    for (_, ivs) in &timelines {
        let mut t = 0.0;
        for iv in ivs {
            t += iv.duration;
            cuts.push(t);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= PRUNE);

    let mut intervals = Vec::new();
    for w in cuts.windows(2) {
        let (from, to) = (w[0], w[1]);
        let mid = 0.5 * (from + to);
        let mut frames = vec![Su2::identity(); n];
        let mut in_pair = vec![false; n];
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for ((k, l), ivs) in &timelines {
            let mut t = 0.0;
            for iv in ivs {
                if mid < t + iv.duration {
                    frames[*k] = iv.frame.0[0];
                    frames[*l] = iv.frame.0[1];
                    in_pair[*k] = true;
                    in_pair[*l] = true;
                    cliques.push(vec![*k.min(l), *k.max(l)]);
                    break;
                }
                t += iv.duration;
            }
        }
        cliques.extend((0..n).filter(|&v| !in_pair[v]).map(|v| vec![v]));
        cliques.sort();
        let h = cliques.len().next_power_of_two();
        let x = Su2::pauli(0);
        for m in 0..h {
            let mut frame = frames.clone();
            for (i, c) in cliques.iter().enumerate() {
                if (i & m).count_ones() % 2 == 1 {
                    for &v in c {
                        frame[v] = frame[v].mul(&x);
                    }
                }
            }
            intervals.push(FrameInterval {
                frame: LocalFrame(frame),
                duration: (to - from) / h as f64,
            });
        }
    }
    let has_fields = fields.iter().flatten().any(|&x| x.abs() > PRUNE);
    let schedule = ConjugationSchedule {
        n,
        intervals,
        trailing: None,
        local_fields: has_fields.then_some(fields),
    };
    schedule.validate()?;
    Ok(StepPlan {
        mu: cuts.last().copied().unwrap_or(0.0),
        schedule,
        target,
    })
}

/// Layered circuit for `exp(iH dt)`: per norm level and per color class of
/// the threshold graph, one step of gates `exp(i Ĥ_kl Δr dt)` with
/// `Ĥ_kl = H_kl / ‖H_kl‖`.
pub fn compile_parallel_circuit(h: &JMatrix, dt: f64, cfg: &Config) -> Result<Circuit, PlanError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(PlanError::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let wci = weighted_chromatic_index(h, cfg.exact_coloring_edge_cap);
    let norms: Vec<((usize, usize), PairMatrix, f64)> =
        h.blocks().map(|(key, b)| (key, *b, pair_norm(b, None))).collect();
    let mut steps = Vec::new();
    for level in &wci.levels {
        let members: Vec<_> = norms
            .iter()
            .filter(|(_, _, r)| *r >= level.to * (1.0 - 1e-12))
            .collect();
        let g = WeightedGraph::new(h.n(), members.iter().map(|((k, l), _, _)| (*k, *l, 1.0)))?;
        let coloring = chromatic_index(&g, cfg.exact_coloring_edge_cap).coloring;
        for class in coloring.classes() {
            let mut gates = Vec::with_capacity(class.len());
            for (k, l) in class {
                let (_, b, r) = members
                    .iter()
                    .find(|(key, _, _)| *key == (k, l))
                    .expect("edge of threshold graph");
                let unit = b.scaled(1.0 / r);
                let u = expm_i_hermitian(&pair_hamiltonian(&unit, None), (level.to - level.from) * dt)?;
                gates.push(Gate {
                    pair: (k, l),
                    unitary: u,
                });
            }
            steps.push(gates);
        }
    }
    Ok(Circuit::new(h.n(), steps)?)
}
