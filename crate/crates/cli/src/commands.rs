use std::path::Path;

use serde::Serialize;
use zzsim::planner::{
    bounds_report, chromatic_schedule, circuit_step_plan, clique_schedule, clique_walsh_schedule, gate_angle,
    hadamard_schedule, inversion_lower_bound, invert_plan, is_local_gate, optimal_zz_plan, rank_one_schedule, LpStatus,
    PlanError,
};
use zzsim::verifier::{effective_hamiltonian, product_certificate, verify_zz, CertificateSummary, VerifyOptions};
use zzsim::{graph_to_jmatrix, BoundsReport, Config, Schedule, SignSchedule, WeightedGraph};

use crate::error::CliError;
use crate::formats::{self, ScheduleFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lp,
    Rank1,
    Walsh,
    Hadamard,
    Clique,
    Chromatic,
}

#[derive(Debug, Serialize)]
pub struct BoundsOutput {
    pub n: usize,
    pub edges: usize,
    #[serde(flatten)]
    pub report: BoundsReport,
    pub sandwich_ok: bool,
}

pub fn bounds(graph: &Path, cfg: &Config) -> Result<BoundsOutput, CliError> {
    let g = formats::load_graph(graph)?;
    let report = bounds_report(&g, cfg)?;
    Ok(BoundsOutput {
        n: g.n(),
        edges: g.edge_count(),
        sandwich_ok: report.sandwich_holds(cfg.tol),
        report,
    })
}

#[derive(Debug, Serialize)]
pub struct PlanOutput {
    pub method: Method,
    pub mu: f64,
    pub intervals: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_status: Option<LpStatus>,
    pub avg_hamiltonian_error: f64,
    pub schedule: ScheduleFile,
}

/// Plans a schedule. The input is a graph for `lp`, `clique` and
/// `chromatic`, a cliques file for `walsh` and `hadamard`, and a jz file
/// for `rank1`.
pub fn plan(input: &Path, method: Method, cfg: &Config) -> Result<PlanOutput, CliError> {
    let mut lp_status = None;
    let (schedule, target): (SignSchedule, WeightedGraph) = match method {
        Method::Lp | Method::Clique | Method::Chromatic => {
            let g = formats::load_graph(input)?;
            let s = match method {
                Method::Lp => {
                    let sol = optimal_zz_plan(&g, cfg)?;
                    lp_status = Some(sol.status);
                    sol.schedule
                }
                Method::Clique => clique_schedule(&g, cfg)?,
                _ => chromatic_schedule(&g, cfg)?,
            };
            (s, g)
        }
        Method::Walsh | Method::Hadamard => {
            let file = formats::load_cliques(input)?;
            let cliques = file.partition()?;
            let s = if method == Method::Walsh {
                clique_walsh_schedule(file.n, &cliques)?
            } else {
                hadamard_schedule(file.n, &cliques)?
            };
            (s, cliques_target(file.n, &cliques)?)
        }
        Method::Rank1 => {
            let file = formats::load_jz(input)?;
            let s = rank_one_schedule(&file.jz)?;
            let n = file.jz.len();
            let edges = (0..n)
                .flat_map(|k| ((k + 1)..n).map(move |l| (k, l)))
                .filter_map(|(k, l)| {
                    let w = file.jz[k] * file.jz[l];
                    (w != 0.0).then_some((k, l, w))
                });
            (s, WeightedGraph::new(n, edges.collect::<Vec<_>>())?)
        }
    };
    let schedule = Schedule::Signs(schedule);
    let drift = graph_to_jmatrix(&WeightedGraph::complete(target.n()));
    let avg = effective_hamiltonian(&schedule, &drift)?;
    Ok(PlanOutput {
        method,
        mu: schedule.overhead(),
        intervals: schedule.interval_count(),
        lp_status,
        avg_hamiltonian_error: avg.max_abs_diff(&graph_to_jmatrix(&target)),
        schedule: ScheduleFile::from_schedule(&schedule, Some(&target)),
    })
}

fn cliques_target(n: usize, cliques: &[Vec<usize>]) -> Result<WeightedGraph, CliError> {
    let mut edges = Vec::new();
    for c in cliques {
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                edges.push((a, b, 1.0));
            }
        }
    }
    Ok(WeightedGraph::new(n, edges)?)
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    #[serde(flatten)]
    pub report: zzsim::verifier::VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
}

pub struct VerifyArgs<'a> {
    pub schedule: &'a Path,
    pub target: Option<&'a Path>,
    pub drift: Option<&'a Path>,
    pub epsilon: f64,
    pub steps: usize,
}

pub fn verify(args: &VerifyArgs<'_>, cfg: &Config) -> Result<VerifyOutput, CliError> {
    let file = formats::load_schedule(args.schedule)?;
    let schedule = file.to_schedule()?;
    let target = match (args.target, &file.target) {
        (Some(path), _) => formats::load_graph(path)?,
        (None, Some(embedded)) => embedded.to_graph()?,
        (None, None) => {
            return Err(CliError::Invalid(
                "no target: pass --target or use a schedule file that embeds one".into(),
            ))
        }
    };
    let drift = match args.drift {
        Some(path) => formats::load_graph(path)?,
        None => WeightedGraph::complete(schedule.n()),
    };
    if !(args.epsilon > 0.0) || args.steps == 0 {
        return Err(CliError::Invalid(
            "--epsilon must be positive and --steps at least 1".into(),
        ));
    }
    let opts = VerifyOptions {
        epsilon: args.epsilon,
        steps: args.steps,
    };
    let report = verify_zz(&schedule, &drift, &target, &opts, cfg)?;
    let certificate = match &schedule {
        Schedule::Signs(s) if report.mu > 0.0 && args.drift.is_none() => {
            Some(product_certificate(s, &target, cfg.tol)?.summary())
        }
        _ => None,
    };
    Ok(VerifyOutput { report, certificate })
}

#[derive(Debug, Serialize)]
pub struct InvertOutput {
    pub mu: f64,
    /// Conjugated qubits (1-based).
    pub flipped: Vec<usize>,
    pub inversion_lower: f64,
    pub schedule: ScheduleFile,
}

pub fn invert(drift: &Path, general: bool) -> Result<InvertOutput, CliError> {
    let g = formats::load_graph(drift)?;
    let plan = invert_plan(&g, general).map_err(|e| match e {
        PlanError::NotBipartite { .. } => CliError::Invalid(format!("{e} (`zzsim plan --method lp`)")),
        other => other.into(),
    })?;
    Ok(InvertOutput {
        mu: plan.mu,
        flipped: plan.flipped.iter().map(|v| v + 1).collect(),
        inversion_lower: inversion_lower_bound(&g)?,
        schedule: ScheduleFile::from_schedule(&plan.schedule, Some(&g.negated())),
    })
}

#[derive(Debug, Serialize)]
pub struct StepOutput {
    pub angles: Vec<f64>,
    pub max_angle: f64,
    pub mu: f64,
}

#[derive(Debug, Serialize)]
pub struct DepthOutput {
    pub n: usize,
    pub weighted_depth: f64,
    pub steps: Vec<StepOutput>,
}

/// Per-step gate angles, the weighted depth, and the overhead of the
/// step-by-step conjugation plan against the complete drift.
pub fn depth(circuit: &Path) -> Result<DepthOutput, CliError> {
    let c = formats::load_circuit(circuit)?.to_circuit()?;
    let mut steps = Vec::with_capacity(c.steps.len());
    let mut total = 0.0;
    for step in &c.steps {
        let angles = step
            .iter()
            .map(|g| {
                if is_local_gate(&g.unitary) {
                    Ok(0.0)
                } else {
                    gate_angle(&g.unitary)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let max_angle = angles.iter().fold(0.0_f64, |a, &b| a.max(b));
        total += max_angle;
        let mu = circuit_step_plan(c.n, step)?.mu;
        steps.push(StepOutput { angles, max_angle, mu });
    }
    Ok(DepthOutput {
        n: c.n,
        weighted_depth: total,
        steps,
    })
}
