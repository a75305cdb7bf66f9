use std::collections::BTreeMap;

use crate::config::Config;
use crate::graphops::{clique_signs_of, weighted_chromatic_index, weighted_clique_index};
use crate::model::{graph_to_jmatrix, SignInterval, SignSchedule, WeightedGraph};

use super::lp::{pattern_index, pattern_signs};
use super::{PlanError, PRUNE};

/// Largest number of cliques accepted by the Walsh construction.
const MAX_WALSH_CLIQUES: usize = 24;

/// Product-weight schedule for a rank-one target `J_kl = jz_k jz_l`:
/// interval `u ∈ {±}^n` lasts `Π_i c_i(u_i)` with `c± = (1 ± jz_i)/2`.
pub fn rank_one_schedule(jz: &[f64]) -> Result<SignSchedule, PlanError> {
    if jz.is_empty() {
        return Err(PlanError::InvalidInput("empty jz vector".into()));
    }
    if let Some((i, v)) = jz.iter().enumerate().find(|(_, v)| !(v.abs() <= 1.0)) {
        return Err(PlanError::InvalidInput(format!(
            "jz[{}] = {v} is outside [-1, 1]",
            i + 1
        )));
    }
    let mut intervals = Vec::new();
    let mut signs = Vec::with_capacity(jz.len());
    expand(jz, &mut signs, 1.0, &mut intervals);
    Ok(SignSchedule::new(jz.len(), intervals)?)
}

fn expand(jz: &[f64], signs: &mut Vec<i8>, weight: f64, out: &mut Vec<SignInterval>) {
    let i = signs.len();
    if i == jz.len() {
        if weight > PRUNE {
            out.push(SignInterval {
                signs: signs.clone(),
                duration: weight,
            });
        }
        return;
    }
    for (s, c) in [(1i8, (1.0 + jz[i]) / 2.0), (-1, (1.0 - jz[i]) / 2.0)] {
        if c == 0.0 {
            continue;
        }
        signs.push(s);
        expand(jz, signs, weight * c, out);
        signs.pop();
    }
}

/// Checks that `cliques` partition `0..n`.
fn check_partition(n: usize, cliques: &[Vec<usize>]) -> Result<(), PlanError> {
    let mut seen = vec![false; n];
    for c in cliques {
        if c.is_empty() {
            return Err(PlanError::InvalidInput("empty clique".into()));
        }
        for &v in c {
            if v >= n {
                return Err(PlanError::InvalidInput(format!("vertex {} out of range", v + 1)));
            }
            if seen[v] {
                return Err(PlanError::InvalidInput(format!("vertex {} appears twice", v + 1)));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(PlanError::InvalidInput(format!("vertex {} is not covered", v + 1)));
    }
    Ok(())
}

/// Spreads per-clique sign rows onto qubits, optionally flipped per qubit.
fn assemble(
    n: usize,
    cliques: &[Vec<usize>],
    rows: &[Vec<i8>],
    flips: Option<&[i8]>,
    duration: f64,
) -> Vec<SignInterval> {
    let count = rows.first().map_or(0, Vec::len);
    (0..count)
        .map(|m| {
            let mut signs = vec![1i8; n];
            for (i, c) in cliques.iter().enumerate() {
                for &v in c {
                    signs[v] = rows[i][m] * flips.map_or(1, |f| f[v]);
                }
            }
            SignInterval { signs, duration }
        })
        .collect()
}

/// Independent-cliques schedule: `2^(ω−1)` intervals of equal length; clique
/// 1 is always `+`, clique `i ≥ 2` follows bit `i − 2` of the interval index.
pub fn clique_walsh_schedule(n: usize, cliques: &[Vec<usize>]) -> Result<SignSchedule, PlanError> {
    check_partition(n, cliques)?;
    let omega = cliques.len();
    if omega > MAX_WALSH_CLIQUES {
        return Err(PlanError::InvalidInput(format!(
            "{omega} cliques exceed the Walsh limit of {MAX_WALSH_CLIQUES}"
        )));
    }
    let count = 1usize << (omega - 1);
    let rows: Vec<Vec<i8>> = (0..omega)
        .map(|i| {
            (0..count)
                .map(|m| if i == 0 || (m >> (i - 1)) & 1 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect();
    Ok(SignSchedule::new(
        n,
        assemble(n, cliques, &rows, None, 1.0 / count as f64),
    )?)
}

/// Rows of the Sylvester-Hadamard matrix of order `h`.
fn sylvester_rows(count: usize, h: usize) -> Vec<Vec<i8>> {
    (0..count)
        .map(|i| {
            (0..h)
                .map(|m| if (i & m).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect()
}

fn hadamard_order(omega: usize) -> usize {
    omega.max(1).next_power_of_two()
}

/// Same contract as [`clique_walsh_schedule`] using `h = 2^⌈log₂ ω⌉` rows of
/// a Sylvester-Hadamard matrix.
pub fn hadamard_schedule(n: usize, cliques: &[Vec<usize>]) -> Result<SignSchedule, PlanError> {
    check_partition(n, cliques)?;
    let h = hadamard_order(cliques.len());
    let rows = sylvester_rows(cliques.len(), h);
    Ok(SignSchedule::new(n, assemble(n, cliques, &rows, None, 1.0 / h as f64))?)
}

/// Hadamard intervals realising `σ_k σ_l` on each given clique and zero
/// elsewhere; uncovered vertices become singleton cliques.
fn signed_layer(n: usize, cliques: &[Vec<usize>], sigma: &[i8], duration: f64) -> Vec<SignInterval> {
    let mut all: Vec<Vec<usize>> = cliques.to_vec();
    let mut covered = vec![false; n];
    for c in cliques {
        for &v in c {
            covered[v] = true;
        }
    }
    all.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
    let h = hadamard_order(all.len());
    let rows = sylvester_rows(all.len(), h);
    assemble(n, &all, &rows, Some(sigma), duration / h as f64)
}

/// Sums durations of intervals equal up to a global flip, in pattern order.
pub fn merge_patterns(n: usize, intervals: &[SignInterval]) -> Result<SignSchedule, PlanError> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for iv in intervals {
        *acc.entry(pattern_index(&iv.signs)).or_insert(0.0) += iv.duration;
    }
    let merged = acc
        .into_iter()
        .filter(|&(_, t)| t > PRUNE)
        .map(|(p, t)| SignInterval {
            signs: pattern_signs(p, n),
            duration: t,
        })
        .collect();
    Ok(SignSchedule::new(n, merged)?)
}

/// Layered schedule achieving the signed clique-coloring bound: every
/// magnitude level contributes one Hadamard layer per color class.
pub fn clique_schedule(target: &WeightedGraph, cfg: &Config) -> Result<SignSchedule, PlanError> {
    let n = target.n();
    let index = weighted_clique_index(target, cfg.exact_coloring_edge_cap);
    let mut intervals = Vec::new();
    for (from, to, coloring) in &index.levels {
        let level = WeightedGraph::new(
            n,
            target
                .edges()
                .iter()
                .filter(|e| e.w.abs() >= to * (1.0 - 1e-12))
                .map(|e| (e.k, e.l, e.w.signum())),
        )?;
        for class in coloring.classes() {
            let mut sigma = vec![1i8; n];
            for c in &class {
                let s =
                    clique_signs_of(&level, c).ok_or_else(|| PlanError::Inconsistent("clique sign pattern".into()))?;
                for (&v, &x) in c.iter().zip(&s) {
                    sigma[v] = x;
                }
            }
            intervals.extend(signed_layer(n, &class, &sigma, to - from));
        }
    }
    merge_patterns(n, &intervals)
}

/// Layered schedule achieving the weighted chromatic bound: each matching
/// of each threshold level is one Hadamard layer of signed pairs.
pub fn chromatic_schedule(target: &WeightedGraph, cfg: &Config) -> Result<SignSchedule, PlanError> {
    let n = target.n();
    let wci = weighted_chromatic_index(&graph_to_jmatrix(target), cfg.exact_coloring_edge_cap);
    let mut intervals = Vec::new();
    for level in &wci.levels {
        let g = WeightedGraph::new(
            n,
            target
                .edges()
                .iter()
                .filter(|e| e.w.abs() >= level.to * (1.0 - 1e-12))
                .map(|e| (e.k, e.l, e.w)),
        )?;
        let chi = crate::graphops::chromatic_index(&g, cfg.exact_coloring_edge_cap);
        for class in chi.coloring.classes() {
            let mut sigma = vec![1i8; n];
            let cliques: Vec<Vec<usize>> = class
                .iter()
                .map(|&(k, l)| {
                    if g.weight(k, l) < 0.0 {
                        sigma[l] = -1;
                    }
                    vec![k, l]
                })
                .collect();
            intervals.extend(signed_layer(n, &cliques, &sigma, level.to - level.from));
        }
    }
    merge_patterns(n, &intervals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::average_zz;

    fn avg(s: &SignSchedule) -> WeightedGraph {
        average_zz(s, &WeightedGraph::complete(s.n)).unwrap()
    }

    #[test]
    fn rank_one_all_plus() {
        let s = rank_one_schedule(&[1.0; 4]).unwrap();
        assert_eq!(s.intervals.len(), 1);
        assert_eq!(s.intervals[0].sign_string(), "++++");
        assert_eq!(s.intervals[0].duration, 1.0);
    }

    #[test]
    fn rank_one_anti_aligned_pair() {
        let s = rank_one_schedule(&[1.0, -1.0]).unwrap();
        assert_eq!(s.intervals.len(), 1);
        assert_eq!(s.intervals[0].sign_string(), "+-");
        assert_eq!(avg(&s).weight(0, 1), -1.0);
    }

    #[test]
    fn rank_one_half_weights() {
        let s = rank_one_schedule(&[1.0, 0.5, 0.5]).unwrap();
        assert_eq!(s.intervals.len(), 4);
        let a = avg(&s);
        assert!((a.weight(0, 1) - 0.5).abs() < 1e-15);
        assert!((a.weight(0, 2) - 0.5).abs() < 1e-15);
        assert!((a.weight(1, 2) - 0.25).abs() < 1e-15);
        assert!((s.overhead() - 1.0).abs() < 1e-15);
        assert!(rank_one_schedule(&[1.5]).is_err());
    }

    #[test]
    fn walsh_two_pairs() {
        let s = clique_walsh_schedule(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let strings: Vec<_> = s.intervals.iter().map(|i| i.sign_string()).collect();
        assert_eq!(strings, vec!["++++", "++--"]);
        assert!(s.intervals.iter().all(|i| i.duration == 0.5));
        let a = avg(&s);
        assert_eq!(a.weight(0, 1), 1.0);
        assert_eq!(a.weight(2, 3), 1.0);
        assert_eq!(a.weight(0, 2), 0.0);
    }

    #[test]
    fn walsh_single_clique_is_drift() {
        let s = clique_walsh_schedule(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(s.intervals.len(), 1);
        assert_eq!(s.intervals[0].duration, 1.0);
    }

    #[test]
    fn walsh_three_cliques() {
        let s = clique_walsh_schedule(5, &[vec![0, 3], vec![1], vec![2, 4]]).unwrap();
        assert_eq!(s.intervals.len(), 4);
        let a = avg(&s);
        assert_eq!(a.edge_count(), 2);
        assert_eq!(a.weight(0, 3), 1.0);
        assert_eq!(a.weight(2, 4), 1.0);
    }

    #[test]
    fn hadamard_counts() {
        let two = [vec![0, 1], vec![2, 3]];
        assert_eq!(
            hadamard_schedule(4, &two).unwrap(),
            clique_walsh_schedule(4, &two).unwrap()
        );
        let five: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        assert_eq!(hadamard_schedule(5, &five).unwrap().intervals.len(), 8);
        assert_eq!(clique_walsh_schedule(5, &five).unwrap().intervals.len(), 16);
        let three = hadamard_schedule(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(avg(&three).edge_count(), 0);
    }

    #[test]
    fn partition_errors() {
        assert!(clique_walsh_schedule(3, &[vec![0, 1]]).is_err());
        assert!(clique_walsh_schedule(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(hadamard_schedule(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn layered_schedules_hit_their_bounds() {
        let cfg = Config::default();
        let g = WeightedGraph::new(5, [(0, 1, 1.0), (0, 2, -0.5), (1, 2, -0.5), (3, 4, 2.0), (1, 3, 0.25)]).unwrap();
        let wci = weighted_chromatic_index(&graph_to_jmatrix(&g), 12).value;
        let wcl = weighted_clique_index(&g, 12).value;
        for (s, bound) in [
            (chromatic_schedule(&g, &cfg).unwrap(), wci),
            (clique_schedule(&g, &cfg).unwrap(), wcl),
        ] {
            assert!((s.overhead() - bound).abs() < 1e-12);
            let a = avg(&s);
            for e in g.edges() {
                assert!((a.weight(e.k, e.l) - e.w).abs() < 1e-12);
            }
            assert_eq!(a.edge_count(), g.edge_count());
        }
    }
}
