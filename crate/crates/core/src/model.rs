//! Domain types shared by the planner and the verifier.
//!
//! Vertices (qubits) are 0-based everywhere in this crate. Error messages and
//! file formats use 1-based labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::complex::{CMatrix, ONE};
use crate::linalg::matrix::{mat3_transpose, Mat3, Matrix};
use crate::linalg::rotation::Su2;

/// Tolerance used when checking unitarity of frames and gates.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("qubit count must be at least 1, got {0}")]
    EmptyRegister(usize),
    #[error("edge {index}: vertex {} out of range 1..={n}", vertex + 1)]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index}: self-loop at vertex {}", vertex + 1)]
    SelfLoop { index: usize, vertex: usize },
    #[error("duplicate edge ({}, {})", k + 1, l + 1)]
    DuplicateEdge { k: usize, l: usize },
    #[error("pair ({}, {}): non-finite coefficient", k + 1, l + 1)]
    NonFinite { k: usize, l: usize },
    #[error("interval {interval}: non-positive duration {duration}")]
    NonPositiveDuration { interval: usize, duration: f64 },
    #[error("interval {interval}: expected {expected} entries, found {found}")]
    WrongLength {
        interval: usize,
        expected: usize,
        found: usize,
    },
    #[error("interval {interval}, qubit {}: sign must be +1 or -1, got {value}", qubit + 1)]
    BadSign { interval: usize, qubit: usize, value: i8 },
    #[error("interval {interval}, qubit {}: frame is not in SU(2)", qubit + 1)]
    BadFrame { interval: usize, qubit: usize },
    #[error("step {step}: qubit {} used by more than one gate", qubit + 1)]
    OverlappingPairs { step: usize, qubit: usize },
    #[error("step {step}, gate {gate}: {reason}")]
    BadGate { step: usize, gate: usize, reason: String },
    #[error("ensemble term {term}: {reason}")]
    BadEnsemble { term: usize, reason: String },
    #[error("{0}")]
    Invalid(String),
}

/// Checks every structural invariant of a value.
pub trait Validate {
    fn validate(&self) -> Result<(), ModelError>;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub k: usize,
    pub l: usize,
    pub w: f64,
}

/// zz-weighted interaction graph on `n` qubits. Edges are kept sorted with
/// `k < l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds and canonicalizes a graph from 0-based `(k, l, w)` triples.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, ModelError> {
        let g = WeightedGraph {
            n,
            edges: edges.into_iter().map(|(k, l, w)| Edge { k, l, w }).collect(),
        };
        g.canonical()
    }

    /// Same as [`WeightedGraph::new`] with 1-based vertex labels.
    pub fn from_one_based(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, ModelError> {
        let mut shifted = Vec::new();
        for (index, (k, l, w)) in edges.into_iter().enumerate() {
            if k == 0 || l == 0 {
                return Err(ModelError::Invalid(format!("edge {index}: vertex labels start at 1")));
            }
            shifted.push((k - 1, l - 1, w));
        }
        Self::new(n, shifted)
    }

    /// Validated copy with edges swapped to `k < l` and sorted.
    pub fn canonical(&self) -> Result<Self, ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (index, e) in self.edges.iter().enumerate() {
            for v in [e.k, e.l] {
                if v >= self.n {
                    return Err(ModelError::VertexOutOfRange {
                        index,
                        vertex: v,
                        n: self.n,
                    });
                }
            }
            if e.k == e.l {
                return Err(ModelError::SelfLoop { index, vertex: e.k });
            }
            if !e.w.is_finite() {
                return Err(ModelError::NonFinite { k: e.k, l: e.l });
            }
            edges.push(Edge {
                k: e.k.min(e.l),
                l: e.k.max(e.l),
                w: e.w,
            });
        }
        edges.sort_by_key(|e| (e.k, e.l));
        for pair in edges.windows(2) {
            if (pair[0].k, pair[0].l) == (pair[1].k, pair[1].l) {
                return Err(ModelError::DuplicateEdge {
                    k: pair[0].k,
                    l: pair[0].l,
                });
            }
        }
        Ok(WeightedGraph { n: self.n, edges })
    }

    /// `K_n` with unit weights: the complete zz drift.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|k| ((k + 1)..n).map(move |l| Edge { k, l, w: 1.0 }));
        WeightedGraph {
            n: n.max(1),
            edges: edges.collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            n: n.max(1),
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weight of the pair, 0 when absent.
    pub fn weight(&self, k: usize, l: usize) -> f64 {
        let key = (k.min(l), k.max(l));
        self.edges
            .binary_search_by_key(&key, |e| (e.k, e.l))
            .map_or(0.0, |i| self.edges[i].w)
    }

    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.k, e.l)] = e.w;
            a[(e.l, e.k)] = e.w;
        }
        a
    }

    pub fn scaled(&self, s: f64) -> Self {
        WeightedGraph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { w: e.w * s, ..*e }).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.edges.iter().fold(0.0_f64, |m, e| m.max(e.w.abs()))
    }

    /// Edges with non-zero weight, as 0-based pairs.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.edges.iter().filter(|e| e.w != 0.0).map(|e| (e.k, e.l)).collect()
    }

    /// Adjacency matrix from a symmetric `n x n` matrix; entries with
    /// `|a_kl| <= drop` are omitted.
    pub fn from_adjacency(a: &Matrix, drop: f64) -> Result<Self, ModelError> {
        if !a.is_square() {
            return Err(ModelError::Invalid("adjacency matrix must be square".into()));
        }
        let n = a.rows();
        let mut edges = Vec::new();
        for k in 0..n {
            for l in (k + 1)..n {
                let w = 0.5 * (a[(k, l)] + a[(l, k)]);
                if w.abs() > drop {
                    edges.push((k, l, w));
                }
            }
        }
        Self::new(n, edges)
    }
}

impl Validate for WeightedGraph {
    fn validate(&self) -> Result<(), ModelError> {
        let c = self.canonical()?;
        if c.edges != self.edges {
            return Err(ModelError::Invalid("edges are not in canonical order".into()));
        }
        Ok(())
    }
}

/// 3x3 coupling matrix `J_{αβ}` of `Σ J_{αβ} σ_α ⊗ σ_β`, axes ordered x, y, z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMatrix(pub Mat3);

impl PairMatrix {
    pub fn zero() -> Self {
        PairMatrix([[0.0; 3]; 3])
    }

    pub fn zz(w: f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        m[2][2] = w;
        PairMatrix(m)
    }

    pub fn diag(d: [f64; 3]) -> Self {
        PairMatrix(crate::linalg::matrix::mat3_diag(d))
    }

    pub fn zz_weight(&self) -> f64 {
        self.0[2][2]
    }

    pub fn transpose(&self) -> Self {
        PairMatrix(mat3_transpose(&self.0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|&x| x == 0.0)
    }

    /// Only the zz entry may be non-zero.
    pub fn is_pure_zz(&self) -> bool {
        (0..3).all(|a| (0..3).all(|b| (a == 2 && b == 2) || self.0[a][b] == 0.0))
    }

    pub fn scaled(&self, s: f64) -> Self {
        PairMatrix(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn add(&self, other: &PairMatrix) -> Self {
        let mut m = self.0;
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] += other.0[a][b];
            }
        }
        PairMatrix(m)
    }

    pub fn max_abs_diff(&self, other: &PairMatrix) -> f64 {
        crate::linalg::matrix::mat3_max_abs_diff(&self.0, &other.0)
    }
}

impl Validate for PairMatrix {
    fn validate(&self) -> Result<(), ModelError> {
        if self.0.iter().flatten().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::Invalid("pair matrix has non-finite entries".into()))
        }
    }
}

/// Block J-matrix of a pair-interaction Hamiltonian: upper blocks `(k, l)`
/// with `k < l`; the lower blocks are their transposes and the diagonal is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JMatrix {
    n: usize,
    blocks: BTreeMap<(usize, usize), PairMatrix>,
}

impl JMatrix {
    pub fn zeros(n: usize) -> Self {
        JMatrix {
            n,
            blocks: BTreeMap::new(),
        }
    }

    /// Blocks keyed by 0-based `(k, l)`; keys with `k > l` are stored transposed.
    pub fn new(n: usize, blocks: impl IntoIterator<Item = ((usize, usize), PairMatrix)>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        let mut j = JMatrix::zeros(n);
        for (index, ((k, l), block)) in blocks.into_iter().enumerate() {
            for v in [k, l] {
                if v >= n {
                    return Err(ModelError::VertexOutOfRange { index, vertex: v, n });
                }
            }
            if k == l {
                return Err(ModelError::SelfLoop { index, vertex: k });
            }
            if block.validate().is_err() {
                return Err(ModelError::NonFinite { k, l });
            }
            let (key, block) = if k < l {
                ((k, l), block)
            } else {
                ((l, k), block.transpose())
            };
            if j.blocks.insert(key, block).is_some() {
                return Err(ModelError::DuplicateEdge { k: key.0, l: key.1 });
            }
        }
        Ok(j)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored upper blocks in `(k, l)` order.
    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &PairMatrix)> {
        self.blocks.iter().map(|(&key, b)| (key, b))
    }

    /// Block `J_kl`; transposed when `k > l`, zero when absent.
    pub fn block(&self, k: usize, l: usize) -> PairMatrix {
        if k < l {
            self.blocks.get(&(k, l)).copied().unwrap_or_else(PairMatrix::zero)
        } else if k > l {
            self.blocks
                .get(&(l, k))
                .map(|b| b.transpose())
                .unwrap_or_else(PairMatrix::zero)
        } else {
            PairMatrix::zero()
        }
    }

    /// Adds `block` to the `(k, l)` entry (`k != l`).
    pub fn accumulate(&mut self, k: usize, l: usize, block: &PairMatrix) {
        assert!(k != l && k < self.n && l < self.n);
        let (key, b) = if k < l {
            ((k, l), *block)
        } else {
            ((l, k), block.transpose())
        };
        let entry = self.blocks.entry(key).or_insert_with(PairMatrix::zero);
        *entry = entry.add(&b);
    }

    /// Dense `3n x 3n` matrix, row index `3k + α`.
    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(3 * self.n, 3 * self.n);
        for (&(k, l), b) in &self.blocks {
            for a in 0..3 {
                for c in 0..3 {
                    m[(3 * k + a, 3 * l + c)] = b.0[a][c];
                    m[(3 * l + c, 3 * k + a)] = b.0[a][c];
                }
            }
        }
        m
    }

    /// Inverse of [`JMatrix::to_dense`]; requires symmetry and zero diagonal blocks.
    pub fn from_dense(m: &Matrix, tol: f64) -> Result<Self, ModelError> {
        if !m.is_square() || !m.rows().is_multiple_of(3) || m.rows() == 0 {
            return Err(ModelError::Invalid("J-matrix must be 3n x 3n".into()));
        }
        if !m.is_symmetric(tol) {
            return Err(ModelError::Invalid("J-matrix must be symmetric".into()));
        }
        let n = m.rows() / 3;
        let mut blocks = Vec::new();
        for k in 0..n {
            for a in 0..3 {
                for c in 0..3 {
                    if m[(3 * k + a, 3 * k + c)].abs() > tol {
                        return Err(ModelError::Invalid(format!("diagonal block {} is not zero", k + 1)));
                    }
                }
            }
            for l in (k + 1)..n {
                let mut b = [[0.0; 3]; 3];
                for a in 0..3 {
                    for c in 0..3 {
                        b[a][c] = m[(3 * k + a, 3 * l + c)];
                    }
                }
                let b = PairMatrix(b);
                if !b.is_zero() {
                    blocks.push(((k, l), b));
                }
            }
        }
        JMatrix::new(n, blocks)
    }

    /// zz entries as a weighted graph (zero entries omitted).
    pub fn zz_graph(&self) -> WeightedGraph {
        let edges = self
            .blocks
            .iter()
            .filter(|(_, b)| b.zz_weight() != 0.0)
            .map(|(&(k, l), b)| Edge { k, l, w: b.zz_weight() })
            .collect();
        WeightedGraph { n: self.n, edges }
    }

    pub fn is_pure_zz(&self) -> bool {
        self.blocks.values().all(|b| b.is_pure_zz())
    }

    pub fn scaled(&self, s: f64) -> Self {
        JMatrix {
            n: self.n,
            blocks: self.blocks.iter().map(|(&k, b)| (k, b.scaled(s))).collect(),
        }
    }

    /// Largest entrywise difference over all blocks.
    pub fn max_abs_diff(&self, other: &JMatrix) -> f64 {
        assert_eq!(self.n, other.n, "J-matrices of different size");
        let mut worst = 0.0_f64;
        for key in self.blocks.keys().chain(other.blocks.keys()) {
            worst = worst.max(self.block(key.0, key.1).max_abs_diff(&other.block(key.0, key.1)));
        }
        worst
    }
}

impl Validate for JMatrix {
    fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        for (index, (&(k, l), b)) in self.blocks.iter().enumerate() {
            if k >= l || l >= self.n {
                return Err(ModelError::VertexOutOfRange {
                    index,
                    vertex: l,
                    n: self.n,
                });
            }
            if b.validate().is_err() {
                return Err(ModelError::NonFinite { k, l });
            }
        }
        Ok(())
    }
}

/// Embeds zz weights: block `(k, l)` holds `w_kl` in its zz entry only.
pub fn graph_to_jmatrix(g: &WeightedGraph) -> JMatrix {
    JMatrix {
        n: g.n,
        blocks: g.edges.iter().map(|e| ((e.k, e.l), PairMatrix::zz(e.w))).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignInterval {
    /// `+1` (no conjugation) or `-1` (conjugation by σx) per qubit.
    pub signs: Vec<i8>,
    pub duration: f64,
}

impl SignInterval {
    /// Signs as a string over `+`/`-`, qubit 1 first.
    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }
}

/// Schedule whose frames are products of identities and σx.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignSchedule {
    pub n: usize,
    pub intervals: Vec<SignInterval>,
}

impl SignSchedule {
    pub fn new(n: usize, intervals: Vec<SignInterval>) -> Result<Self, ModelError> {
        let s = SignSchedule { n, intervals };
        s.validate()?;
        Ok(s)
    }

    /// Parses `+`/`-` strings (the Unicode minus is accepted too).
    pub fn from_strings<S: AsRef<str>>(n: usize, intervals: &[(S, f64)]) -> Result<Self, ModelError> {
        let mut out = Vec::with_capacity(intervals.len());
        for (i, (pattern, duration)) in intervals.iter().enumerate() {
            let signs = parse_signs(pattern.as_ref())
                .ok_or_else(|| ModelError::Invalid(format!("interval {i}: sign string must use '+' and '-'")))?;
            out.push(SignInterval {
                signs,
                duration: *duration,
            });
        }
        Self::new(n, out)
    }

    pub fn overhead(&self) -> f64 {
        self.intervals.iter().map(|i| i.duration).sum()
    }

    /// Every sign flipped; the induced average Hamiltonian is unchanged.
    pub fn flipped(&self) -> Self {
        SignSchedule {
            n: self.n,
            intervals: self
                .intervals
                .iter()
                .map(|i| SignInterval {
                    signs: i.signs.iter().map(|s| -s).collect(),
                    duration: i.duration,
                })
                .collect(),
        }
    }

    /// Same schedule with σx frames on the `-` qubits.
    pub fn to_conjugation(&self) -> ConjugationSchedule {
        let x = Su2::pauli(0);
        ConjugationSchedule {
            n: self.n,
            intervals: self
                .intervals
                .iter()
                .map(|i| FrameInterval {
                    frame: LocalFrame(
                        i.signs
                            .iter()
                            .map(|&s| if s > 0 { Su2::identity() } else { x })
                            .collect(),
                    ),
                    duration: i.duration,
                })
                .collect(),
            trailing: None,
            local_fields: None,
        }
    }
}

pub fn parse_signs(pattern: &str) -> Option<Vec<i8>> {
    pattern
        .chars()
        .map(|c| match c {
            '+' => Some(1),
            '-' | '\u{2212}' => Some(-1),
            _ => None,
        })
        .collect()
}

impl Validate for SignSchedule {
    fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.signs.len() != self.n {
                return Err(ModelError::WrongLength {
                    interval: i,
                    expected: self.n,
                    found: iv.signs.len(),
                });
            }
            if let Some((q, &v)) = iv.signs.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
                return Err(ModelError::BadSign {
                    interval: i,
                    qubit: q,
                    value: v,
                });
            }
            if !(iv.duration > 0.0) || !iv.duration.is_finite() {
                return Err(ModelError::NonPositiveDuration {
                    interval: i,
                    duration: iv.duration,
                });
            }
        }
        Ok(())
    }
}

/// One SU(2) element per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFrame(pub Vec<Su2>);

impl LocalFrame {
    pub fn identity(n: usize) -> Self {
        LocalFrame(vec![Su2::identity(); n])
    }

    /// Tensor product `u_1 ⊗ ... ⊗ u_n` (qubit 1 most significant).
    pub fn unitary(&self) -> CMatrix {
        self.0
            .iter()
            .fold(CMatrix::identity(1), |acc, u| acc.kron(&u.to_cmatrix()))
    }

    fn check(&self, interval: usize) -> Result<(), ModelError> {
        for (q, u) in self.0.iter().enumerate() {
            let ok = u.0.iter().flatten().all(|z| z.is_finite())
                && u.unitarity_defect() <= UNITARY_TOL
                && (u.det() - ONE).norm() <= UNITARY_TOL;
            if !ok {
                return Err(ModelError::BadFrame { interval, qubit: q });
            }
        }
        Ok(())
    }
}

impl Validate for LocalFrame {
    fn validate(&self) -> Result<(), ModelError> {
        self.check(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameInterval {
    pub frame: LocalFrame,
    pub duration: f64,
}

/// Piecewise-constant plan: in each interval the drift is conjugated by the
/// interval's local frame (`H_j = u H_d u†`).
///
/// `local_fields` holds single-qubit Bloch-vector fields (`Σ h_k · σ^k`)
/// that fast local control applies at no time cost; they are not part of the
/// J-matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationSchedule {
    pub n: usize,
    pub intervals: Vec<FrameInterval>,
    pub trailing: Option<LocalFrame>,
    pub local_fields: Option<Vec<[f64; 3]>>,
}

impl ConjugationSchedule {
    pub fn new(n: usize, intervals: Vec<FrameInterval>) -> Result<Self, ModelError> {
        let s = ConjugationSchedule {
            n,
            intervals,
            trailing: None,
            local_fields: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn overhead(&self) -> f64 {
        self.intervals.iter().map(|i| i.duration).sum()
    }
}

impl Validate for ConjugationSchedule {
    fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.frame.0.len() != self.n {
                return Err(ModelError::WrongLength {
                    interval: i,
                    expected: self.n,
                    found: iv.frame.0.len(),
                });
            }
            iv.frame.check(i)?;
            if !(iv.duration > 0.0) || !iv.duration.is_finite() {
                return Err(ModelError::NonPositiveDuration {
                    interval: i,
                    duration: iv.duration,
                });
            }
        }
        if let Some(t) = &self.trailing {
            if t.0.len() != self.n {
                return Err(ModelError::Invalid("trailing frame has wrong length".into()));
            }
            t.check(self.intervals.len())?;
        }
        if let Some(fields) = &self.local_fields {
            if fields.len() != self.n || !fields.iter().flatten().all(|x| x.is_finite()) {
                return Err(ModelError::Invalid("local fields must be n finite 3-vectors".into()));
            }
        }
        Ok(())
    }
}

/// Either kind of executable plan.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Signs(SignSchedule),
    Frames(ConjugationSchedule),
}

impl Schedule {
    pub fn n(&self) -> usize {
        match self {
            Schedule::Signs(s) => s.n,
            Schedule::Frames(s) => s.n,
        }
    }

    pub fn overhead(&self) -> f64 {
        match self {
            Schedule::Signs(s) => s.overhead(),
            Schedule::Frames(s) => s.overhead(),
        }
    }

    pub fn interval_count(&self) -> usize {
        match self {
            Schedule::Signs(s) => s.intervals.len(),
            Schedule::Frames(s) => s.intervals.len(),
        }
    }

    pub fn to_conjugation(&self) -> ConjugationSchedule {
        match self {
            Schedule::Signs(s) => s.to_conjugation(),
            Schedule::Frames(s) => s.clone(),
        }
    }
}

impl Validate for Schedule {
    fn validate(&self) -> Result<(), ModelError> {
        match self {
            Schedule::Signs(s) => s.validate(),
            Schedule::Frames(s) => s.validate(),
        }
    }
}

/// A two-qubit gate on 0-based qubits `pair`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub pair: (usize, usize),
    pub unitary: CMatrix,
}

/// Steps of two-qubit gates on disjoint pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub steps: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(n: usize, steps: Vec<Vec<Gate>>) -> Result<Self, ModelError> {
        let c = Circuit { n, steps };
        c.validate()?;
        Ok(c)
    }
}

impl Validate for Circuit {
    fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyRegister(0));
        }
        for (s, step) in self.steps.iter().enumerate() {
            let mut used = vec![false; self.n];
            for (g, gate) in step.iter().enumerate() {
                let (k, l) = gate.pair;
                let bad = |reason: &str| ModelError::BadGate {
                    step: s,
                    gate: g,
                    reason: reason.to_string(),
                };
                if k >= self.n || l >= self.n {
                    return Err(bad("qubit out of range"));
                }
                if k == l {
                    return Err(bad("gate acts twice on the same qubit"));
                }
                if gate.unitary.rows() != 4 || gate.unitary.cols() != 4 {
                    return Err(bad("gate must be 4x4"));
                }
                if gate.unitary.unitarity_defect() > UNITARY_TOL {
                    return Err(bad("gate is not unitary"));
                }
                if (gate.unitary.det() - ONE).norm() > 1e-8 {
                    return Err(bad("gate determinant is not 1"));
                }
                for q in [k, l] {
                    if used[q] {
                        return Err(ModelError::OverlappingPairs { step: s, qubit: q });
                    }
                    used[q] = true;
                }
            }
        }
        Ok(())
    }
}

/// Lower and upper bounds on the overhead of a zz target against the complete drift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lower_spectral: f64,
    pub upper_chromatic: f64,
    pub upper_clique: f64,
    pub lp_optimum: Option<f64>,
    pub inversion_lower: Option<f64>,
    /// Whether both upper bounds came from exact colorings.
    pub exact_upper: bool,
}

impl BoundsReport {
    /// `lower ≤ lp ≤ min(upper)` (and the Weyl bound ≤ lp) within `tol`.
    pub fn sandwich_holds(&self, tol: f64) -> bool {
        let upper = self.upper_chromatic.min(self.upper_clique);
        match self.lp_optimum {
            Some(lp) => {
                self.lower_spectral <= lp + tol
                    && lp <= upper + tol
                    && self.inversion_lower.is_none_or(|w| w <= lp + tol)
            }
            None => self.lower_spectral <= upper + tol,
        }
    }
}

/// `(tr(ρ σ_α^k σ_β^l))`, indexed `(3k + α, 3l + β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix(pub Matrix);

impl Validate for CorrelationMatrix {
    fn validate(&self) -> Result<(), ModelError> {
        let m = &self.0;
        if !m.is_square() || !m.rows().is_multiple_of(3) || !m.is_finite() || !m.is_symmetric(1e-9) {
            return Err(ModelError::Invalid(
                "correlation matrix must be finite, symmetric and 3n x 3n".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub bloch: Vec<[f64; 3]>,
}

/// Convex mixture of pure product states given by Bloch vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEnsemble {
    pub n: usize,
    pub terms: Vec<EnsembleTerm>,
}

impl ProductEnsemble {
    /// Correlation matrix of the mixture. Off-diagonal blocks are
    /// `Σ p b_k b_lᵀ`; a diagonal block is `I` plus the antisymmetric
    /// single-qubit term, whose real part vanishes.
    pub fn correlation(&self) -> CorrelationMatrix {
        let n = self.n;
        let mut m = Matrix::zeros(3 * n, 3 * n);
        for t in &self.terms {
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    for a in 0..3 {
                        for b in 0..3 {
                            m[(3 * k + a, 3 * l + b)] += t.weight * t.bloch[k][a] * t.bloch[l][b];
                        }
                    }
                }
            }
        }
        let total: f64 = self.terms.iter().map(|t| t.weight).sum();
        for k in 0..n {
            for a in 0..3 {
                m[(3 * k + a, 3 * k + a)] = total;
            }
        }
        CorrelationMatrix(m)
    }

    /// Mean single-qubit Bloch vectors `Σ p b_k`.
    pub fn local_expectations(&self) -> Vec<[f64; 3]> {
        let mut out = vec![[0.0; 3]; self.n];
        for t in &self.terms {
            for (k, b) in t.bloch.iter().enumerate() {
                for a in 0..3 {
                    out[k][a] += t.weight * b[a];
                }
            }
        }
        out
    }
}

impl Validate for ProductEnsemble {
    fn validate(&self) -> Result<(), ModelError> {
        let mut total = 0.0;
        for (i, t) in self.terms.iter().enumerate() {
            if !(t.weight > 0.0) || !t.weight.is_finite() {
                return Err(ModelError::BadEnsemble {
                    term: i,
                    reason: format!("weight {} is not positive", t.weight),
                });
            }
            if t.bloch.len() != self.n {
                return Err(ModelError::BadEnsemble {
                    term: i,
                    reason: "wrong number of Bloch vectors".into(),
                });
            }
            if t.bloch
                .iter()
                .any(|b| (crate::linalg::matrix::norm3(*b) - 1.0).abs() > 1e-9)
            {
                return Err(ModelError::BadEnsemble {
                    term: i,
                    reason: "Bloch vector is not a unit vector".into(),
                });
            }
            total += t.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(ModelError::Invalid(format!("ensemble weights sum to {total}, not 1")));
        }
        Ok(())
    }
}
