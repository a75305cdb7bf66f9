use serde::Serialize;

use super::edge_coloring::norm_levels;
use super::Adjacency;
use crate::model::WeightedGraph;

/// Edge partition into cliques, colored so that cliques sharing a vertex differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueColoring {
    pub cliques: Vec<Vec<usize>>,
    pub colors: Vec<usize>,
    pub count: usize,
}

impl CliqueColoring {
    /// Color classes as vertex-disjoint clique lists.
    pub fn classes(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.count];
        for (c, &color) in self.cliques.iter().zip(&self.colors) {
            out[color].push(c.clone());
        }
        out
    }

    /// Every edge of `g` lies in exactly one clique, every clique is complete
    /// in `g`, and the coloring is proper.
    pub fn is_valid(&self, g: &WeightedGraph) -> bool {
        let n = g.n();
        let mut covered = vec![vec![0usize; n]; n];
        for c in &self.cliques {
            if c.len() < 2 || c.iter().any(|&v| v >= n) {
                return false;
            }
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    if a == b || g.weight(a, b) == 0.0 {
                        return false;
                    }
                    covered[a.min(b)][a.max(b)] += 1;
                }
            }
        }
        if g.edges().iter().any(|e| covered[e.k][e.l] != 1) {
            return false;
        }
        let edge_total: usize = covered.iter().flatten().sum();
        if edge_total != g.edge_count() || self.colors.len() != self.cliques.len() {
            return false;
        }
        for i in 0..self.cliques.len() {
            if self.colors[i] >= self.count {
                return false;
            }
            for j in (i + 1)..self.cliques.len() {
                let share = self.cliques[i].iter().any(|v| self.cliques[j].contains(v));
                if share && self.colors[i] == self.colors[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Whether each clique carries a sign pattern `w_kl ~ σ_k σ_l`.
    pub fn is_sign_consistent(&self, g: &WeightedGraph) -> bool {
        self.cliques.iter().all(|c| clique_signs_of(g, c).is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueColoringResult {
    pub index: usize,
    pub witness: CliqueColoring,
    pub exact: bool,
}

/// Vertex signs `σ` with `sign(w_kl) = σ_k σ_l` on the clique, first vertex `+1`.
pub fn clique_signs_of(g: &WeightedGraph, clique: &[usize]) -> Option<Vec<i8>> {
    let Some(&first) = clique.first() else {
        return Some(Vec::new());
    };
    let sign = |a: usize, b: usize| if g.weight(a, b) < 0.0 { -1i8 } else { 1 };
    let sigma: Vec<i8> = clique
        .iter()
        .map(|&v| if v == first { 1 } else { sign(first, v) })
        .collect();
    for i in 0..clique.len() {
        for j in (i + 1)..clique.len() {
            if sign(clique[i], clique[j]) != sigma[i] * sigma[j] {
                return None;
            }
        }
    }
    Some(sigma)
}

/// All maximal cliques (Bron-Kerbosch with pivoting), each sorted, in
/// lexicographic order. Isolated vertices yield singleton cliques.
pub fn maximal_cliques(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let a = Adjacency::new(g);
    let mut out = Vec::new();
    bron_kerbosch(&a.adj, Vec::new(), (0..a.n).collect(), Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(adj: &[Vec<bool>], r: Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&v| adj[u][v]).count(), std::cmp::Reverse(u)))
        .unwrap();
    let mut p = p;
    let mut x = x;
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in branch {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Clique coloring index of the edge set of `g` (weights ignored).
pub fn clique_coloring_index(g: &WeightedGraph, exact_limit: usize) -> CliqueColoringResult {
    let unit = WeightedGraph::new(g.n(), g.edges().iter().map(|e| (e.k, e.l, 1.0))).expect("valid graph");
    search(&unit, exact_limit)
}

/// As [`clique_coloring_index`], but a clique is admissible only when its edge
/// signs factor as `σ_k σ_l`.
pub fn signed_clique_coloring_index(g: &WeightedGraph, exact_limit: usize) -> CliqueColoringResult {
    search(g, exact_limit)
}

fn search(g: &WeightedGraph, exact_limit: usize) -> CliqueColoringResult {
    let greedy = greedy_coloring(g);
    if g.edge_count() == 0 {
        return CliqueColoringResult {
            index: 0,
            witness: greedy,
            exact: true,
        };
    }
    if g.edge_count() > exact_limit {
        return CliqueColoringResult {
            index: greedy.count,
            witness: greedy,
            exact: false,
        };
    }
    for h in 1..greedy.count {
        if let Some(w) = Exact::new(g, h).run() {
            return CliqueColoringResult {
                index: h,
                witness: w,
                exact: true,
            };
        }
    }
    CliqueColoringResult {
        index: greedy.count,
        witness: greedy,
        exact: true,
    }
}

struct Exact<'a> {
    g: &'a WeightedGraph,
    a: Adjacency,
    h: usize,
    assigned: Vec<Vec<bool>>,
    vertex_colors: Vec<u64>,
    cliques: Vec<Vec<usize>>,
    colors: Vec<usize>,
}

impl<'a> Exact<'a> {
    fn new(g: &'a WeightedGraph, h: usize) -> Self {
        let n = g.n();
        Exact {
            g,
            a: Adjacency::new(g),
            h,
            assigned: vec![vec![false; n]; n],
            vertex_colors: vec![0; n],
            cliques: Vec::new(),
            colors: Vec::new(),
        }
    }

    fn run(mut self) -> Option<CliqueColoring> {
        assert!(self.h <= 64);
        if self.dfs(0) {
            Some(CliqueColoring {
                cliques: self.cliques,
                colors: self.colors,
                count: self.h,
            })
        } else {
            None
        }
    }

    fn dfs(&mut self, top: usize) -> bool {
        let next = self.g.edges().iter().find(|e| !self.assigned[e.k][e.l]);
        let Some(e) = next else {
            return true;
        };
        let (u, v) = (e.k, e.l);
        let candidates: Vec<usize> = (0..self.a.n)
            .filter(|&x| x != u && x != v && self.free(u, x) && self.free(v, x))
            .collect();
        let mut options = Vec::new();
        self.extend(&mut vec![u, v], &candidates, 0, &mut options);
        // larger cliques first: they cover more edges per color
        options.sort_by_key(|c| std::cmp::Reverse(c.len()));
        for clique in options {
            let busy = clique.iter().fold(0u64, |m, &x| m | self.vertex_colors[x]);
            for c in 0..self.h.min(top + 1) {
                if busy & (1 << c) != 0 {
                    continue;
                }
                self.place(&clique, c, true);
                if self.dfs(top.max(c + 1)) {
                    return true;
                }
                self.place(&clique, c, false);
            }
        }
        false
    }

    fn free(&self, a: usize, b: usize) -> bool {
        self.a.adj[a][b] && !self.assigned[a.min(b)][a.max(b)]
    }

    /// Every admissible clique `current ∪ S`, `S ⊆ candidates[from..]`.
    fn extend(&self, current: &mut Vec<usize>, candidates: &[usize], from: usize, out: &mut Vec<Vec<usize>>) {
        if clique_signs_of(self.g, current).is_some() {
            out.push(current.clone());
        } else {
            return;
        }
        for i in from..candidates.len() {
            let x = candidates[i];
            if current.iter().all(|&y| self.free(x, y)) {
                current.push(x);
                self.extend(current, candidates, i + 1, out);
                current.pop();
            }
        }
    }

    fn place(&mut self, clique: &[usize], color: usize, on: bool) {
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                self.assigned[a.min(b)][a.max(b)] = on;
            }
            if on {
                self.vertex_colors[a] |= 1 << color;
            } else {
                self.vertex_colors[a] &= !(1 << color);
            }
        }
        if on {
            let mut c = clique.to_vec();
            c.sort_unstable();
            self.cliques.push(c);
            self.colors.push(color);
        } else {
            self.cliques.pop();
            self.colors.pop();
        }
    }
}

/// Covers the first uncovered edge with the largest admissible clique of the
/// uncovered graph (Bron-Kerbosch on its common neighbourhood), then colors
/// cliques first-fit.
fn greedy_coloring(g: &WeightedGraph) -> CliqueColoring {
    let n = g.n();
    let a = Adjacency::new(g);
    let mut covered = vec![vec![false; n]; n];
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for e in g.edges() {
        if covered[e.k][e.l] {
            continue;
        }
        let (u, v) = (e.k, e.l);
        let free = |x: usize, y: usize, covered: &Vec<Vec<bool>>| a.adj[x][y] && !covered[x.min(y)][x.max(y)];
        let su = 1i8;
        let sv = if g.weight(u, v) < 0.0 { -1 } else { 1 };
        let sign = |x: usize, y: usize| if g.weight(x, y) < 0.0 { -1i8 } else { 1 };
        let cand: Vec<usize> = (0..n)
            .filter(|&x| x != u && x != v && free(u, x, &covered) && free(v, x, &covered))
            .filter(|&x| sign(u, x) * su * sign(v, x) * sv == 1)
            .collect();
        let sigma = |x: usize| sign(u, x) * su;
        let mut aux = vec![vec![false; n]; n];
        for &x in &cand {
            for &y in &cand {
                if x != y && free(x, y, &covered) && sign(x, y) == sigma(x) * sigma(y) {
                    aux[x][y] = true;
                }
            }
        }
        let mut found = Vec::new();
        bron_kerbosch(&aux, Vec::new(), cand.clone(), Vec::new(), &mut found);
        let best = found
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .max_by(|x, y| x.len().cmp(&y.len()).then_with(|| y.cmp(x)))
            .unwrap_or_default();
        let mut clique = vec![u, v];
        clique.extend(best);
        clique.sort_unstable();
        for (i, &x) in clique.iter().enumerate() {
            for &y in &clique[i + 1..] {
                covered[x.min(y)][x.max(y)] = true;
            }
        }
        cliques.push(clique);
    }

    let mut colors = Vec::with_capacity(cliques.len());
    let mut vertex_colors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in &cliques {
        let color = (0..)
            .find(|col| c.iter().all(|&x| !vertex_colors[x].contains(col)))
            .unwrap();
        for &x in c {
            vertex_colors[x].push(color);
        }
        colors.push(color);
    }
    let count = colors.iter().map(|c| c + 1).max().unwrap_or(0);
    CliqueColoring { cliques, colors, count }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedCliqueIndex {
    pub value: f64,
    pub exact: bool,
    /// `(from, to, coloring)` per magnitude level.
    pub levels: Vec<(f64, f64, CliqueColoring)>,
}

/// Signed clique index integrated over weight magnitudes:
/// `Σ_i (r_{i+1} − r_i) · c±(G_{r_i})`, where `G_r` keeps edges with `|w| > r`.
pub fn weighted_clique_index(target: &WeightedGraph, exact_limit: usize) -> WeightedCliqueIndex {
    let levels = norm_levels(target.edges().iter().map(|e| e.w.abs()).collect());
    let mut value = 0.0;
    let mut exact = true;
    let mut out = Vec::new();
    let mut from = 0.0;
    for &to in &levels {
        let edges: Vec<_> = target
            .edges()
            .iter()
            .filter(|e| e.w.abs() >= to * (1.0 - 1e-12))
            .map(|e| (e.k, e.l, e.w.signum()))
            .collect();
        let g = WeightedGraph::new(target.n(), edges).expect("valid graph");
        let res = signed_clique_coloring_index(&g, exact_limit);
        value += (to - from) * res.index as f64;
        exact &= res.exact;
        out.push((from, to, res.witness));
        from = to;
    }
    WeightedCliqueIndex {
        value,
        exact,
        levels: out,
    }
}
