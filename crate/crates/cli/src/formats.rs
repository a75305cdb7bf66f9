//! File formats. Vertices and qubits are 1-based in every file.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use zzsim::linalg::{expm_i_hermitian, CMatrix, Su2};
use zzsim::verifier::pair_hamiltonian;
use zzsim::{
    Circuit, ConjugationSchedule, FrameInterval, Gate, LocalFrame, PairMatrix, Schedule, SignInterval, SignSchedule,
    WeightedGraph,
};

use crate::error::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn json_error(source: &str, e: serde_json::Error) -> CliError {
    CliError::Parse {
        path: source.to_string(),
        line: e.line(),
        message: e.to_string(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| json_error(source, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl GraphFile {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges().iter().map(|e| (e.k + 1, e.l + 1, e.w)).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph, CliError> {
        Ok(WeightedGraph::from_one_based(self.n, self.edges.iter().copied())?)
    }
}

/// Text (`n <count>` then `k l w` lines; `#` starts a comment) or JSON
/// (`{"n": .., "edges": [[k, l, w], ..]}`).
pub fn parse_graph(text: &str, source: &str) -> Result<WeightedGraph, CliError> {
    if text.trim_start().starts_with('{') {
        return from_json::<GraphFile>(text, source)?.to_graph();
    }
    let err = |line: usize, message: String| CliError::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match n {
            None => match fields.as_slice() {
                ["n", count] => {
                    n = Some(
                        count
                            .parse::<usize>()
                            .map_err(|e| err(line, format!("bad qubit count: {e}")))?,
                    );
                }
                _ => return Err(err(line, "expected `n <count>` header".into())),
            },
            Some(_) => match fields.as_slice() {
                [k, l, w] => {
                    let k = k
                        .parse::<usize>()
                        .map_err(|e| err(line, format!("bad vertex `{k}`: {e}")))?;
                    let l = l
                        .parse::<usize>()
                        .map_err(|e| err(line, format!("bad vertex `{l}`: {e}")))?;
                    let w = w
                        .parse::<f64>()
                        .map_err(|e| err(line, format!("bad weight `{w}`: {e}")))?;
                    edges.push((line, k, l, w));
                }
                _ => return Err(err(line, format!("expected `k l w`, found `{content}`"))),
            },
        }
    }
    let n = n.ok_or_else(|| err(1, "missing `n <count>` header".into()))?;
    for &(line, k, l, _) in &edges {
        if k == 0 || l == 0 || k > n || l > n {
            return Err(err(line, format!("vertex out of range 1..={n}")));
        }
        if k == l {
            return Err(err(line, format!("self-loop at vertex {k}")));
        }
    }
    Ok(WeightedGraph::from_one_based(
        n,
        edges.into_iter().map(|(_, k, l, w)| (k, l, w)),
    )?)
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph, CliError> {
    parse_graph(&read(path)?, &path.display().to_string())
}

/// `{"n": .., "cliques": [[1, 2], [3]]}`; uncovered qubits become singletons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliquesFile {
    pub n: usize,
    pub cliques: Vec<Vec<usize>>,
}

impl CliquesFile {
    /// 0-based partition of `0..n`.
    pub fn partition(&self) -> Result<Vec<Vec<usize>>, CliError> {
        let mut covered = vec![false; self.n];
        let mut out = Vec::with_capacity(self.cliques.len());
        for c in &self.cliques {
            let mut block = Vec::with_capacity(c.len());
            for &v in c {
                if v == 0 || v > self.n {
                    return Err(CliError::Invalid(format!(
                        "clique vertex {v} out of range 1..={}",
                        self.n
                    )));
                }
                if covered[v - 1] {
                    return Err(CliError::Invalid(format!("vertex {v} appears in two cliques")));
                }
                covered[v - 1] = true;
                block.push(v - 1);
            }
            out.push(block);
        }
        out.extend((0..self.n).filter(|&v| !covered[v]).map(|v| vec![v]));
        Ok(out)
    }
}

pub fn load_cliques(path: &Path) -> Result<CliquesFile, CliError> {
    from_json(&read(path)?, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JzFile {
    pub jz: Vec<f64>,
}

pub fn load_jz(path: &Path) -> Result<JzFile, CliError> {
    from_json(&read(path)?, &path.display().to_string())
}

/// A per-qubit rotation `exp(−i angle/2 · axis·σ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl AxisAngle {
    fn from_su2(u: &Su2) -> Self {
        let (axis, angle) = u.axis_angle();
        AxisAngle { axis, angle }
    }

    fn to_su2(&self) -> Result<Su2, CliError> {
        let norm = self.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() || !self.angle.is_finite() {
            return Err(CliError::Invalid("frame axis must be a finite non-zero vector".into()));
        }
        Ok(Su2::from_axis_angle(self.axis.map(|x| x / norm), self.angle))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignIntervalFile {
    pub signs: String,
    pub duration: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameIntervalFile {
    pub frames: Vec<AxisAngle>,
    pub duration: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleBody {
    Signs {
        intervals: Vec<SignIntervalFile>,
    },
    Frames {
        intervals: Vec<FrameIntervalFile>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trailing: Option<Vec<AxisAngle>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        local_fields: Option<Vec<[f64; 3]>>,
    },
}

/// Schedule on disk, optionally carrying the zz target it was planned for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub n: usize,
    pub mu: f64,
    #[serde(flatten)]
    pub body: ScheduleBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GraphFile>,
}

impl ScheduleFile {
    pub fn from_schedule(s: &Schedule, target: Option<&WeightedGraph>) -> Self {
        let body = match s {
            Schedule::Signs(signs) => ScheduleBody::Signs {
                intervals: signs
                    .intervals
                    .iter()
                    .map(|iv| SignIntervalFile {
                        signs: iv.sign_string(),
                        duration: iv.duration,
                    })
                    .collect(),
            },
            Schedule::Frames(f) => ScheduleBody::Frames {
                intervals: f
                    .intervals
                    .iter()
                    .map(|iv| FrameIntervalFile {
                        frames: iv.frame.0.iter().map(AxisAngle::from_su2).collect(),
                        duration: iv.duration,
                    })
                    .collect(),
                trailing: f
                    .trailing
                    .as_ref()
                    .map(|t| t.0.iter().map(AxisAngle::from_su2).collect()),
                local_fields: f.local_fields.clone(),
            },
        };
        ScheduleFile {
            n: s.n(),
            mu: s.overhead(),
            body,
            target: target.map(GraphFile::from_graph),
        }
    }

    pub fn to_schedule(&self) -> Result<Schedule, CliError> {
        match &self.body {
            ScheduleBody::Signs { intervals } => {
                let mut out = Vec::with_capacity(intervals.len());
                for (i, iv) in intervals.iter().enumerate() {
                    let signs = zzsim::parse_signs(&iv.signs).ok_or_else(|| {
                        CliError::Invalid(format!("interval {}: sign string must use '+' and '-'", i + 1))
                    })?;
                    out.push(SignInterval {
                        signs,
                        duration: iv.duration,
                    });
                }
                Ok(Schedule::Signs(SignSchedule::new(self.n, out)?))
            }
            ScheduleBody::Frames {
                intervals,
                trailing,
                local_fields,
            } => {
                let frame = |f: &[AxisAngle]| -> Result<LocalFrame, CliError> {
                    Ok(LocalFrame(f.iter().map(AxisAngle::to_su2).collect::<Result<_, _>>()?))
                };
                let mut s = ConjugationSchedule::new(self.n, Vec::new())?;
                for iv in intervals {
                    s.intervals.push(FrameInterval {
                        frame: frame(&iv.frames)?,
                        duration: iv.duration,
                    });
                }
                s.trailing = trailing.as_deref().map(frame).transpose()?;
                s.local_fields = local_fields.clone();
                zzsim::Validate::validate(&s)?;
                Ok(Schedule::Frames(s))
            }
        }
    }
}

pub fn parse_schedule(text: &str, source: &str) -> Result<ScheduleFile, CliError> {
    from_json(text, source)
}

pub fn load_schedule(path: &Path) -> Result<ScheduleFile, CliError> {
    parse_schedule(&read(path)?, &path.display().to_string())
}

/// Either an explicit unitary (rows of `[re, im]`) or a pair Hamiltonian
/// `H = Σ j_ab σ_a⊗σ_b + a·σ⊗I + b·I⊗σ` applied as `exp(i t H)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateFile {
    pub pair: (usize, usize),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<PairHamiltonianFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairHamiltonianFile {
    pub j: [[f64; 3]; 3],
    #[serde(default)]
    pub a: [f64; 3],
    #[serde(default)]
    pub b: [f64; 3],
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub steps: Vec<Vec<GateFile>>,
}

impl GateFile {
    fn to_gate(&self, n: usize) -> Result<Gate, CliError> {
        let (k, l) = self.pair;
        if k == 0 || l == 0 || k > n || l > n {
            return Err(CliError::Invalid(format!("gate pair ({k}, {l}) out of range 1..={n}")));
        }
        let unitary = match (&self.unitary, &self.hamiltonian) {
            (Some(rows), None) => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(CliError::Invalid("gate unitary must be 4x4".into()));
                }
                CMatrix::from_fn(4, 4, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))
            }
            (None, Some(h)) => {
                let m = pair_hamiltonian(&PairMatrix(h.j), Some((h.a, h.b)));
                expm_i_hermitian(&m, h.t).map_err(|e| CliError::Invalid(e.to_string()))?
            }
            _ => {
                return Err(CliError::Invalid(
                    "gate needs exactly one of `unitary` or `hamiltonian`".into(),
                ))
            }
        };
        Ok(Gate {
            pair: (k - 1, l - 1),
            unitary,
        })
    }
}

impl CircuitFile {
    pub fn to_circuit(&self) -> Result<Circuit, CliError> {
        let steps = self
            .steps
            .iter()
            .map(|step| step.iter().map(|g| g.to_gate(self.n)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit::new(self.n, steps)?)
    }
}

pub fn load_circuit(path: &Path) -> Result<CircuitFile, CliError> {
    from_json(&read(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_graph() {
        let g = parse_graph("n 2\n1 2 1.0\n", "t").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.weight(0, 1), 1.0);
        let g = parse_graph("# star\nn 3  # three qubits\n\n1 2 1\n1 3 -0.5\n", "t").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn text_graph_errors_carry_line_numbers() {
        match parse_graph("n 2\n1 1 1.0\n", "t") {
            Err(CliError::Parse { line: 2, message, .. }) => assert!(message.contains("self-loop")),
            other => panic!("{other:?}"),
        }
        match parse_graph("n 3\n1 2\n", "t") {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_graph("1 2 1\n", "t"),
            Err(CliError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n 3\n1 2 1\n2 1 1\n", "t"),
            Err(CliError::Invalid(_))
        ));
        assert!(matches!(
            parse_graph("n 2\n1 2 x\n", "t"),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn json_graph() {
        let g = parse_graph(r#"{"n": 3, "edges": [[1, 2, 1], [1, 3, 1], [2, 3, 1]]}"#, "t").unwrap();
        assert_eq!(g, WeightedGraph::complete(3));
        assert!(parse_graph(r#"{"n": 3, "edges": [], "extra": 1}"#, "t").is_err());
    }

    #[test]
    fn cliques_fill_singletons() {
        let c = CliquesFile {
            n: 4,
            cliques: vec![vec![1, 3]],
        };
        assert_eq!(c.partition().unwrap(), vec![vec![0, 2], vec![1], vec![3]]);
        let bad = CliquesFile {
            n: 2,
            cliques: vec![vec![1], vec![1, 2]],
        };
        assert!(bad.partition().is_err());
    }

    #[test]
    fn frame_schedule_round_trip() {
        let frames = ConjugationSchedule::new(
            2,
            vec![FrameInterval {
                frame: LocalFrame(vec![Su2::from_axis_angle([0.0, 1.0, 0.0], 0.7), Su2::pauli(0)]),
                duration: 0.25,
            }],
        )
        .unwrap();
        let file = ScheduleFile::from_schedule(&Schedule::Frames(frames.clone()), None);
        let text = serde_json::to_string(&file).unwrap();
        let back = parse_schedule(&text, "t").unwrap().to_schedule().unwrap();
        let Schedule::Frames(back) = back else { panic!() };
        for (a, b) in back.intervals[0].frame.0.iter().zip(&frames.intervals[0].frame.0) {
            assert!(a.distance_up_to_sign(b) < 1e-12);
        }
    }

    #[test]
    fn sign_schedule_round_trip() {
        let s = SignSchedule::from_strings(3, &[("++-", 0.5), ("+-+", 0.25)]).unwrap();
        let file = ScheduleFile::from_schedule(&Schedule::Signs(s.clone()), Some(&WeightedGraph::complete(3)));
        let text = serde_json::to_string_pretty(&file).unwrap();
        assert!(text.contains("\"kind\": \"signs\""));
        let parsed = parse_schedule(&text, "t").unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.to_schedule().unwrap(), Schedule::Signs(s));
    }
}
