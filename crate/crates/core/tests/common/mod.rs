#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zzsim::linalg::Matrix;
use zzsim::WeightedGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with weights uniform in `[-1, 1]` (or 1 when `unit`).
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, unit: bool) -> WeightedGraph {
    let mut edges = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            if rng.gen_bool(p) {
                let w = if unit { 1.0 } else { rng.gen_range(-1.0..1.0) };
                edges.push((k, l, w));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        edges.insert((a, b));
    }
    for k in 0..n {
        for l in k + 1..n {
            if rng.gen_bool(p) {
                edges.insert((k, l));
            }
        }
    }
    WeightedGraph::new(n, edges.into_iter().map(|(k, l)| (k, l, 1.0))).unwrap()
}

/// Random partition of `0..n` into nonempty blocks.
pub fn random_partition(rng: &mut impl Rng, n: usize) -> Vec<Vec<usize>> {
    let blocks = rng.gen_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); blocks];
    for (i, v) in order.into_iter().enumerate() {
        let b = if i < blocks { i } else { rng.gen_range(0..blocks) };
        parts[b].push(v);
    }
    for p in parts.iter_mut() {
        p.sort();
    }
    parts
}

pub fn cliques_graph(n: usize, cliques: &[Vec<usize>]) -> WeightedGraph {
    let mut edges = Vec::new();
    for c in cliques {
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                edges.push((a.min(b), a.max(b), 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Dense Gaussian elimination with partial pivoting; `None` when singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(piv, col);
        b.swap(piv, col);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}
