//! Graph invariants that bound simulation overhead.

mod cliques;
mod edge_coloring;

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{JMatrix, WeightedGraph};
use crate::verifier::pair_norm;

pub use cliques::{
    clique_coloring_index, clique_signs_of, maximal_cliques, signed_clique_coloring_index, weighted_clique_index,
    CliqueColoring, CliqueColoringResult, WeightedCliqueIndex,
};
pub use edge_coloring::{
    brute_force_colorable, chromatic_index, misra_gries, weighted_chromatic_index, ChromaticIndex, EdgeColoring,
    WeightedChromatic,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("threshold must be a non-negative number, got {0}")]
    NegativeThreshold(f64),
}

/// Dense adjacency view of a graph's edge set (weights ignored).
#[derive(Clone, Debug)]
pub(crate) struct Adjacency {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub nbrs: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn new(g: &WeightedGraph) -> Self {
        Self::from_edges(g.n(), g.edges().iter().map(|e| (e.k, e.l)))
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![vec![false; n]; n];
        let mut nbrs = vec![Vec::new(); n];
        for (k, l) in edges {
            adj[k][l] = true;
            adj[l][k] = true;
            nbrs[k].push(l);
            nbrs[l].push(k);
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        Adjacency { n, adj, nbrs }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }
}

/// Pairs whose interaction norm exceeds `r`, as a unit-weight graph.
pub fn threshold_graph(h: &JMatrix, r: f64) -> Result<WeightedGraph, GraphError> {
    if !(r >= 0.0) {
        return Err(GraphError::NegativeThreshold(r));
    }
    let edges: Vec<_> = h
        .blocks()
        .filter(|(_, b)| pair_norm(b, None) > r)
        .map(|((k, l), _)| (k, l, 1.0))
        .collect();
    Ok(WeightedGraph::new(h.n(), edges).expect("blocks of a valid J-matrix form a valid graph"))
}

/// Outcome of a two-coloring attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    Parts {
        x: Vec<usize>,
        y: Vec<usize>,
    },
    /// Vertices of an odd cycle, in cycle order.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn parts(&self) -> Option<(&[usize], &[usize])> {
        match self {
            Bipartition::Parts { x, y } => Some((x, y)),
            Bipartition::OddCycle(_) => None,
        }
    }
}

/// BFS two-coloring. Isolated vertices and the first vertex of every
/// component land in `x`.
pub fn bipartition(g: &WeightedGraph) -> Bipartition {
    let a = Adjacency::new(g);
    let mut side: Vec<Option<bool>> = vec![None; a.n];
    let mut parent = vec![usize::MAX; a.n];
    let mut depth = vec![0usize; a.n];
    for root in 0..a.n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &a.nbrs[u] {
                match side[v] {
                    None => {
                        side[v] = Some(!side[u].unwrap());
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(s) if s == side[u].unwrap() => {
                        return Bipartition::OddCycle(odd_cycle(u, v, &parent, &depth));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let x = (0..a.n).filter(|&v| side[v] == Some(false)).collect();
    let y = (0..a.n).filter(|&v| side[v] == Some(true)).collect();
    Bipartition::Parts { x, y }
}

fn odd_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Components sorted by smallest vertex; each component sorted.
pub fn connected_components(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let a = Adjacency::new(g);
    let mut seen = vec![false; a.n];
    let mut out = Vec::new();
    for root in 0..a.n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &a.nbrs[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the given order.
pub fn induced_subgraph(g: &WeightedGraph, vertices: &[usize]) -> WeightedGraph {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = i;
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| index[e.k] != usize::MAX && index[e.l] != usize::MAX)
        .map(|e| (index[e.k], index[e.l], e.w))
        .collect();
    WeightedGraph::new(vertices.len().max(1), edges).expect("induced subgraph of a valid graph")
}
