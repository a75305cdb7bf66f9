use crate::config::Config;
use crate::linalg::complex::{CMatrix, C64, I, ONE};
use crate::linalg::eigen::{diagonal_phases, expm_i_hermitian};
use crate::model::{ConjugationSchedule, JMatrix, Schedule, SignSchedule, WeightedGraph};

use super::VerifyError;

/// Basis bit of qubit `k` (qubit 0 is the most significant).
fn bit(x: usize, k: usize, n: usize) -> usize {
    (x >> (n - 1 - k)) & 1
}

/// `σ_a ⊗ σ_b` on qubits `k`, `l` (or a single Pauli when `l` is `None`)
/// applied to basis state `x`: returns the image state and its phase.
fn pauli_action(x: usize, n: usize, ops: &[(usize, usize)]) -> (usize, C64) {
    let mut y = x;
    let mut phase = ONE;
    for &(qubit, axis) in ops {
        let b = bit(x, qubit, n);
        match axis {
            0 => y ^= 1 << (n - 1 - qubit),
            1 => {
                y ^= 1 << (n - 1 - qubit);
                phase *= if b == 0 { I } else { -I };
            }
            _ => {
                if b == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (y, phase)
}

/// Full `2^n x 2^n` Hamiltonian of a J-matrix plus optional local fields.
pub fn hamiltonian(h: &JMatrix, fields: Option<&[[f64; 3]]>) -> CMatrix {
    let n = h.n();
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for ((k, l), b) in h.blocks() {
        for a in 0..3 {
            for c in 0..3 {
                let j = b.0[a][c];
                if j == 0.0 {
                    continue;
                }
                for x in 0..dim {
                    let (y, ph) = pauli_action(x, n, &[(k, a), (l, c)]);
                    m[(y, x)] += ph * j;
                }
            }
        }
    }
    if let Some(fields) = fields {
        for (k, f) in fields.iter().enumerate() {
            for a in 0..3 {
                if f[a] == 0.0 {
                    continue;
                }
                for x in 0..dim {
                    let (y, ph) = pauli_action(x, n, &[(k, a)]);
                    m[(y, x)] += ph * f[a];
                }
            }
        }
    }
    m
}

/// Diagonal of a zz Hamiltonian: `E(x) = Σ w_kl z_k z_l` with `z = ±1`.
pub fn zz_energies(g: &WeightedGraph) -> Vec<f64> {
    let n = g.n();
    (0..1usize << n)
        .map(|x| {
            g.edges()
                .iter()
                .map(|e| if bit(x, e.k, n) == bit(x, e.l, n) { e.w } else { -e.w })
                .sum()
        })
        .collect()
}

fn check_cap(n: usize, cap: usize) -> Result<(), VerifyError> {
    if n > cap {
        Err(VerifyError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// `exp(i t H)`. Pure zz input without fields uses exact diagonal phases;
/// anything else goes through a Hermitian eigendecomposition.
pub fn unitary_of(h: &JMatrix, fields: Option<&[[f64; 3]]>, t: f64, cfg: &Config) -> Result<CMatrix, VerifyError> {
    let no_fields = fields.is_none_or(|f| f.iter().flatten().all(|&x| x == 0.0));
    if h.is_pure_zz() && no_fields {
        check_cap(h.n(), cfg.sim_cap_diagonal)?;
        let e = zz_energies(&h.zz_graph());
        return Ok(diagonal_phases(&e.iter().map(|x| x * t).collect::<Vec<_>>()));
    }
    check_cap(h.n(), cfg.sim_cap_general)?;
    Ok(expm_i_hermitian(&hamiltonian(h, fields), t)?)
}

/// Exact propagator of a sign schedule over a zz drift: all interval
/// Hamiltonians are diagonal, so phases simply accumulate.
pub fn sign_schedule_unitary(
    s: &SignSchedule,
    drift: &WeightedGraph,
    eps: f64,
    cfg: &Config,
) -> Result<CMatrix, VerifyError> {
    if s.n != drift.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n,
            other: drift.n(),
        });
    }
    check_cap(s.n, cfg.sim_cap_diagonal)?;
    let n = s.n;
    let mut phases = vec![0.0; 1 << n];
    for iv in &s.intervals {
        for (x, p) in phases.iter_mut().enumerate() {
            let mut e = 0.0;
            for edge in drift.edges() {
                let zk = if bit(x, edge.k, n) == 0 { 1 } else { -1 };
                let zl = if bit(x, edge.l, n) == 0 { 1 } else { -1 };
                let sign = iv.signs[edge.k] * iv.signs[edge.l] * zk * zl;
                e += if sign > 0 { edge.w } else { -edge.w };
            }
            *p += eps * iv.duration * e;
        }
    }
    Ok(diagonal_phases(&phases))
}

/// `(Π_j exp(i ε τ_j H_j / N) · exp(i ε L / N))^N` with `H_j = U_j H_d U_j†`
/// built in Hilbert space and `L` the schedule's local fields; a trailing
/// frame `K` is applied last.
pub fn frame_schedule_unitary(
    s: &ConjugationSchedule,
    drift: &JMatrix,
    eps: f64,
    steps: usize,
    cfg: &Config,
) -> Result<CMatrix, VerifyError> {
    if s.n != drift.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n,
            other: drift.n(),
        });
    }
    check_cap(s.n, cfg.sim_cap_general)?;
    let steps = steps.max(1);
    let dim = 1usize << s.n;
    let hd = hamiltonian(drift, None);
    let dt = eps / steps as f64;
    let mut step = CMatrix::identity(dim);
    for iv in &s.intervals {
        let u = iv.frame.unitary();
        let hj = u.matmul(&hd).matmul(&u.adjoint());
        let p = expm_i_hermitian(&hj, dt * iv.duration)?;
        step = p.matmul(&step);
    }
    if let Some(fields) = &s.local_fields {
        let empty = JMatrix::zeros(s.n);
        let p = expm_i_hermitian(&hamiltonian(&empty, Some(fields)), dt)?;
        step = p.matmul(&step);
    }
    let mut total = CMatrix::identity(dim);
    for _ in 0..steps {
        total = step.matmul(&total);
    }
    if let Some(k) = &s.trailing {
        total = k.unitary().matmul(&total);
    }
    Ok(total)
}

/// Propagator of either schedule kind. Sign schedules over a pure zz drift
/// take the exact diagonal path regardless of `steps`.
pub fn schedule_unitary(
    s: &Schedule,
    drift: &JMatrix,
    eps: f64,
    steps: usize,
    cfg: &Config,
) -> Result<CMatrix, VerifyError> {
    match s {
        Schedule::Signs(signs) if drift.is_pure_zz() => sign_schedule_unitary(signs, &drift.zz_graph(), eps, cfg),
        other => frame_schedule_unitary(&other.to_conjugation(), drift, eps, steps, cfg),
    }
}

/// Operator-norm distance between two unitaries.
pub fn unitary_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let d = a.sub(b);
    if d.max_abs() == 0.0 {
        0.0
    } else {
        d.op_norm()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TrotterScaling {
    pub epsilons: Vec<f64>,
    pub errors: Vec<f64>,
    /// `e(ε)/e(ε/2)`; `None` where both errors are below `1e-12`.
    pub ratios: Vec<Option<f64>>,
    /// Every error is below `1e-12`.
    pub exact: bool,
}

/// Errors `‖U_schedule(ε) − exp(iε(target + L))‖` over a halving sequence of
/// `ε`, with `L` the schedule's local fields, and their successive ratios.
pub fn trotter_scaling(
    s: &Schedule,
    drift: &JMatrix,
    target: &JMatrix,
    epsilons: &[f64],
    steps: usize,
    cfg: &Config,
) -> Result<TrotterScaling, VerifyError> {
    if epsilons.len() < 2 {
        return Err(VerifyError::BadEpsilons("need at least two values".into()));
    }
    for w in epsilons.windows(2) {
        if !(w[0] > 0.0) || ((w[1] * 2.0 - w[0]) / w[0]).abs() > 1e-12 {
            return Err(VerifyError::BadEpsilons(format!("{} does not halve {}", w[1], w[0])));
        }
    }
    let fields = match s {
        Schedule::Frames(f) => f.local_fields.clone(),
        Schedule::Signs(_) => None,
    };
    let mut errors = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let u = schedule_unitary(s, drift, eps, steps, cfg)?;
        let exact = unitary_of(target, fields.as_deref(), eps, cfg)?;
        errors.push(unitary_distance(&u, &exact));
    }
    let ratios = errors
        .windows(2)
        .map(|w| {
            if w[0] <= 1e-12 && w[1] <= 1e-12 {
                None
            } else {
                Some(w[0] / w[1])
            }
        })
        .collect();
    let exact = errors.iter().all(|&e| e <= 1e-12);
    Ok(TrotterScaling {
        epsilons: epsilons.to_vec(),
        errors,
        ratios,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{graph_to_jmatrix, PairMatrix};

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let u = unitary_of(&JMatrix::zeros(3), None, 0.7, &Config::default()).unwrap();
        assert_eq!(u, CMatrix::identity(8));
    }

    #[test]
    fn zz_pair_phases() {
        let t = 0.4;
        let u = unitary_of(
            &graph_to_jmatrix(&WeightedGraph::complete(2)),
            None,
            t,
            &Config::default(),
        )
        .unwrap();
        let e = |s: f64| C64::from_polar(1.0, s * t);
        let expected = CMatrix::from_diag(&[e(1.0), e(-1.0), e(-1.0), e(1.0)]);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn general_path_matches_diagonal_path() {
        let h = graph_to_jmatrix(&WeightedGraph::new(3, [(0, 1, 0.5), (1, 2, -1.0)]).unwrap());
        let cfg = Config::default();
        let diag = unitary_of(&h, None, 0.9, &cfg).unwrap();
        let general = expm_i_hermitian(&hamiltonian(&h, None), 0.9).unwrap();
        assert!(diag.max_abs_diff(&general) < 1e-12);
    }

    #[test]
    fn group_property() {
        let h = JMatrix::new(2, [((0, 1), PairMatrix::diag([0.3, -0.7, 0.2]))]).unwrap();
        let cfg = Config::default();
        let f = [[0.1, 0.0, 0.4], [0.0, -0.2, 0.0]];
        let a = unitary_of(&h, Some(&f), 0.3, &cfg).unwrap();
        let b = unitary_of(&h, Some(&f), 0.5, &cfg).unwrap();
        let ab = unitary_of(&h, Some(&f), 0.8, &cfg).unwrap();
        assert!(a.matmul(&b).max_abs_diff(&ab) < 1e-12);
        assert!(ab.unitarity_defect() < 1e-12);
    }

    #[test]
    fn hamiltonian_matches_kron_construction() {
        use crate::linalg::complex::pauli;
        let mut b = [[0.0; 3]; 3];
        b[0][1] = 0.7;
        b[1][2] = -0.3;
        let h = JMatrix::new(3, [((0, 2), PairMatrix(b))]).unwrap();
        let id = CMatrix::identity(2);
        let expect = pauli(0)
            .kron(&id)
            .kron(&pauli(1))
            .scale(C64::new(0.7, 0.0))
            .add(&pauli(1).kron(&id).kron(&pauli(2)).scale(C64::new(-0.3, 0.0)));
        assert!(hamiltonian(&h, None).max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn sign_schedule_is_exact() {
        let s = SignSchedule::from_strings(3, &[("+++", 0.5), ("+-+", 0.25)]).unwrap();
        let drift = WeightedGraph::complete(3);
        let target = graph_to_jmatrix(&crate::verifier::average_zz(&s, &drift).unwrap());
        let cfg = Config::default();
        let u = sign_schedule_unitary(&s, &drift, 1.0, &cfg).unwrap();
        let exact = unitary_of(&target, None, 1.0, &cfg).unwrap();
        assert!(unitary_distance(&u, &exact) < 1e-12);
    }

    #[test]
    fn empty_schedule_is_identity() {
        let s = Schedule::Signs(SignSchedule::new(2, vec![]).unwrap());
        let d = graph_to_jmatrix(&WeightedGraph::complete(2));
        let u = schedule_unitary(&s, &d, 0.5, 3, &Config::default()).unwrap();
        assert_eq!(u, CMatrix::identity(4));
    }

    #[test]
    fn caps_are_enforced() {
        let cfg = Config {
            sim_cap_diagonal: 3,
            ..Config::default()
        };
        let h = graph_to_jmatrix(&WeightedGraph::complete(4));
        assert!(matches!(
            unitary_of(&h, None, 1.0, &cfg),
            Err(VerifyError::CapExceeded { n: 4, cap: 3 })
        ));
    }

    #[test]
    fn single_epsilon_rejected() {
        let s = Schedule::Signs(SignSchedule::new(2, vec![]).unwrap());
        let d = graph_to_jmatrix(&WeightedGraph::complete(2));
        assert!(trotter_scaling(&s, &d, &d, &[0.1], 1, &Config::default()).is_err());
        assert!(trotter_scaling(&s, &d, &d, &[0.1, 0.04], 1, &Config::default()).is_err());
    }
}
