use crate::graphops::{bipartition, Bipartition};
use crate::linalg::matrix::{mat3_diag, mat3_mul, mat3_transpose, Mat3};
use crate::linalg::rotation::{so3_to_su2, svd3_special, SignedSvd3, Su2};
use crate::model::{
    ConjugationSchedule, FrameInterval, JMatrix, LocalFrame, PairMatrix, Schedule, SignInterval, SignSchedule,
    Validate, WeightedGraph,
};

use super::{PlanError, PRUNE};

#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitPlan {
    pub schedule: ConjugationSchedule,
    pub mu: f64,
    pub svd: SignedSvd3,
}

/// Permutation rotations taking `e_z` to `e_x`, `e_y`, `e_z` respectively.
fn axis_permutation(alpha: usize) -> Mat3 {
    match alpha {
        // columns (e_y, e_z, e_x)
        0 => [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        // columns (e_z, e_x, e_y)
        1 => [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        _ => mat3_diag([1.0, 1.0, 1.0]),
    }
}

/// Canonical plan for a two-qubit target under a unit σz⊗σz drift.
///
/// With `J = U diag(s) V`, interval `α` uses frames lifting `U P_α` (times a
/// π rotation about x when `s_α < 0`) and `Vᵀ P_α` for `|s_α|`, so the
/// interval contributes `s_α U e_α e_αᵀ V`. Local terms ride along as
/// zero-cost fields.
pub fn two_qubit_plan(pair: &PairMatrix, locals: Option<([f64; 3], [f64; 3])>) -> Result<TwoQubitPlan, PlanError> {
    let svd = svd3_special(&pair.0);
    let vt = mat3_transpose(&svd.v);
    let flip = mat3_diag([1.0, -1.0, -1.0]);
    let mut intervals = Vec::new();
    for alpha in 0..3 {
        let s = svd.s[alpha];
        if s.abs() <= PRUNE {
            continue;
        }
        let p = axis_permutation(alpha);
        let mut r1 = mat3_mul(&svd.u, &p);
        if s < 0.0 {
            r1 = mat3_mul(&r1, &flip);
        }
        let r2 = mat3_mul(&vt, &p);
        intervals.push(FrameInterval {
            frame: LocalFrame(vec![so3_to_su2(&r1)?, so3_to_su2(&r2)?]),
            duration: s.abs(),
        });
    }
    let local_fields = locals
        .filter(|(a, b)| a.iter().chain(b).any(|&x| x != 0.0))
        .map(|(a, b)| vec![a, b]);
    let schedule = ConjugationSchedule {
        n: 2,
        intervals,
        trailing: None,
        local_fields,
    };
    Ok(TwoQubitPlan {
        mu: schedule.overhead(),
        schedule,
        svd,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZzExtraction {
    /// Four quarter-length intervals over `I⊗I, I⊗σz, σz⊗I, σz⊗σz`.
    pub schedule: ConjugationSchedule,
    pub zz: f64,
    pub warning: Option<String>,
}

/// Averages a pair drift over σz conjugations, leaving `J_zz σz⊗σz`.
pub fn zz_extraction_plan(pair: &PairMatrix) -> Result<ZzExtraction, PlanError> {
    pair.validate()?;
    let id = Su2::identity();
    let z = Su2::pauli(2);
    let intervals = [(id, id), (id, z), (z, id), (z, z)]
        .into_iter()
        .map(|(a, b)| FrameInterval {
            frame: LocalFrame(vec![a, b]),
            duration: 0.25,
        })
        .collect();
    let zz = pair.zz_weight();
    Ok(ZzExtraction {
        schedule: ConjugationSchedule::new(2, intervals)?,
        zz,
        warning: (zz == 0.0).then(|| "pair has no zz coupling; extraction yields zero interaction".to_string()),
    })
}

/// `min |J_zz|` over interacting drift pairs: the factor by which overheads
/// computed for a unit zz drift must be divided after extraction. `None`
/// when some interacting pair has no zz coupling.
pub fn extraction_scale(drift: &JMatrix) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (_, b) in drift.blocks() {
        if b.is_zero() {
            continue;
        }
        let w = b.zz_weight().abs();
        if w == 0.0 {
            return None;
        }
        best = Some(best.map_or(w, |x: f64| x.min(w)));
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversionPlan {
    pub schedule: Schedule,
    pub mu: f64,
    /// Qubits conjugated by the plan.
    pub flipped: Vec<usize>,
}

fn parts(g: &WeightedGraph) -> Result<Vec<usize>, PlanError> {
    if g.edge_count() == 0 {
        return Err(PlanError::EmptyDrift);
    }
    match bipartition(g) {
        Bipartition::Parts { x, .. } => Ok(x),
        Bipartition::OddCycle(cycle) => Err(PlanError::NotBipartite { cycle }),
    }
}

fn pauli_triple(n: usize, x: &[usize]) -> Vec<FrameInterval> {
    (0..3)
        .map(|axis| {
            let mut frame = vec![Su2::identity(); n];
            for &v in x {
                frame[v] = Su2::pauli(axis);
            }
            FrameInterval {
                frame: LocalFrame(frame),
                duration: 1.0,
            }
        })
        .collect()
}

/// Time reversal of a bipartite zz drift. Pure mode flips the X side with
/// σx once (`μ = 1`); general mode conjugates it by σx, σy and σz in turn
/// (`μ = 3`), which negates any pair interaction across the cut.
pub fn invert_plan(drift: &WeightedGraph, general: bool) -> Result<InversionPlan, PlanError> {
    let x = parts(drift)?;
    let n = drift.n();
    let schedule = if general {
        Schedule::Frames(ConjugationSchedule::new(n, pauli_triple(n, &x))?)
    } else {
        let mut signs = vec![1i8; n];
        for &v in &x {
            signs[v] = -1;
        }
        Schedule::Signs(SignSchedule::new(n, vec![SignInterval { signs, duration: 1.0 }])?)
    };
    Ok(InversionPlan {
        mu: schedule.overhead(),
        schedule,
        flipped: x,
    })
}

/// General-mode inversion for an arbitrary pair-interaction drift whose
/// interaction graph is bipartite.
pub fn invert_plan_general(drift: &JMatrix) -> Result<InversionPlan, PlanError> {
    let support = WeightedGraph::new(
        drift.n(),
        drift
            .blocks()
            .filter(|(_, b)| !b.is_zero())
            .map(|((k, l), _)| (k, l, 1.0)),
    )?;
    let x = parts(&support)?;
    let schedule = Schedule::Frames(ConjugationSchedule::new(drift.n(), pauli_triple(drift.n(), &x))?);
    Ok(InversionPlan {
        mu: schedule.overhead(),
        schedule,
        flipped: x,
    })
}
