use crate::config::Config;
use crate::graphops::{connected_components, induced_subgraph, weighted_chromatic_index, weighted_clique_index};
use crate::linalg::eigen::sym_eig;
use crate::linalg::majorization::majorizes;
use crate::model::{graph_to_jmatrix, BoundsReport, JMatrix, WeightedGraph};

use super::lp::optimal_zz_plan;
use super::PlanError;

const EIG_TOL: f64 = 1e-12;

fn extremes(g: &WeightedGraph) -> Result<(f64, f64), PlanError> {
    let spec = sym_eig(&g.adjacency(), EIG_TOL)?;
    Ok((spec.largest().unwrap_or(0.0), spec.smallest().unwrap_or(0.0)))
}

/// `max(0, −λ_min)` of the adjacency matrix.
pub fn spectral_lower_bound(target: &WeightedGraph) -> Result<f64, PlanError> {
    Ok((-extremes(target)?.1).max(0.0))
}

/// `max(0, −λ_min)` of the full `3n x 3n` J-matrix.
pub fn spectral_lower_bound_j(target: &JMatrix) -> Result<f64, PlanError> {
    let spec = sym_eig(&target.to_dense(), EIG_TOL)?;
    Ok((-spec.smallest().unwrap_or(0.0)).max(0.0))
}

/// Overhead needed to simulate `−H_d` with `H_d`: `r/(−q)` per connected
/// component with at least one edge, maximised over components.
pub fn inversion_lower_bound(drift: &WeightedGraph) -> Result<f64, PlanError> {
    let mut best: Option<f64> = None;
    for comp in connected_components(drift) {
        if comp.len() < 2 {
            continue;
        }
        let sub = induced_subgraph(drift, &comp);
        let (r, q) = extremes(&sub)?;
        if q < 0.0 {
            best = Some(best.map_or(r / -q, |b: f64| b.max(r / -q)));
        }
    }
    best.ok_or(PlanError::EmptyDrift)
}

/// Weyl bound against the complete drift: a target with extreme eigenvalues
/// `r̃`, `q̃` needs `μ ≥ max(r̃/(n−1), −q̃)`.
pub fn weyl_bound(target: &WeightedGraph) -> Result<f64, PlanError> {
    let n = target.n();
    if n < 2 {
        return Ok(0.0);
    }
    let (r, q) = extremes(target)?;
    Ok((r / (n - 1) as f64).max(-q).max(0.0))
}

/// `Spec(target) ≺ μ · Spec(drift)` on the J-matrices: a necessary
/// condition for simulating `target` with overhead `μ`.
pub fn majorization_feasibility(target: &JMatrix, drift: &JMatrix, mu: f64, tol: f64) -> Result<bool, PlanError> {
    if target.n() != drift.n() {
        return Err(PlanError::InvalidInput(format!(
            "target has {} qubits, drift has {}",
            target.n(),
            drift.n()
        )));
    }
    let x = sym_eig(&target.to_dense(), EIG_TOL)?.values;
    let y: Vec<f64> = sym_eig(&drift.to_dense(), EIG_TOL)?
        .values
        .iter()
        .map(|v| v * mu)
        .collect();
    Ok(majorizes(&x, &y, tol)?)
}

/// Lower and upper overhead bounds for a zz target against `K_n`, plus the
/// LP optimum when `n` is within the planning cap.
pub fn bounds_report(target: &WeightedGraph, cfg: &Config) -> Result<BoundsReport, PlanError> {
    let support = WeightedGraph::new(
        target.n(),
        target.edges().iter().filter(|e| e.w != 0.0).map(|e| (e.k, e.l, e.w)),
    )?;
    let lower_spectral = spectral_lower_bound(&support)?;
    let chromatic = weighted_chromatic_index(&graph_to_jmatrix(&support), cfg.exact_coloring_edge_cap);
    let clique = weighted_clique_index(&support, cfg.exact_coloring_edge_cap);
    let lp_optimum = if support.n() <= cfg.lp_cap_n {
        Some(optimal_zz_plan(&support, cfg)?.mu)
    } else {
        None
    };
    let report = BoundsReport {
        lower_spectral,
        upper_chromatic: chromatic.value,
        upper_clique: clique.value,
        lp_optimum,
        inversion_lower: Some(weyl_bound(&support)?),
        exact_upper: chromatic.exact && clique.exact,
    };
    let slack = cfg.tol * support.max_abs_weight().max(1.0) * support.n() as f64;
    if !report.sandwich_holds(slack) {
        return Err(PlanError::Inconsistent(format!("{report:?}")));
    }
    Ok(report)
}
