use serde::Serialize;

use super::Adjacency;
use crate::model::{JMatrix, WeightedGraph};
use crate::verifier::pair_norm;

/// Proper edge coloring; `colors[i]` (0-based) belongs to `edges[i]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeColoring {
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<usize>,
    pub count: usize,
}

impl EdgeColoring {
    /// Adjacent edges have distinct colors and every color is below `count`.
    pub fn is_valid(&self) -> bool {
        if self.edges.len() != self.colors.len() || self.colors.iter().any(|&c| c >= self.count) {
            return false;
        }
        for i in 0..self.edges.len() {
            for j in (i + 1)..self.edges.len() {
                let (a, b) = (self.edges[i], self.edges[j]);
                let touch = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
                if touch && self.colors[i] == self.colors[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Edges grouped by color; every class is a matching.
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.count];
        for (e, &c) in self.edges.iter().zip(&self.colors) {
            out[c].push(*e);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChromaticIndex {
    pub value: usize,
    /// Maximum degree.
    pub lower_bound: usize,
    pub coloring: EdgeColoring,
    pub exact: bool,
}

/// Chromatic index; exact search when the graph has at most `exact_limit`
/// edges, otherwise a Misra-Gries `(Δ+1)`-coloring.
pub fn chromatic_index(g: &WeightedGraph, exact_limit: usize) -> ChromaticIndex {
    let a = Adjacency::new(g);
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.k, e.l)).collect();
    let delta = a.max_degree();
    if edges.len() <= exact_limit {
        for k in delta..=delta + 1 {
            if let Some(colors) = color_with(&edges, a.n, k) {
                return ChromaticIndex {
                    value: k,
                    lower_bound: delta,
                    coloring: EdgeColoring {
                        edges,
                        colors,
                        count: k,
                    },
                    exact: true,
                };
            }
        }
        unreachable!("every simple graph is (Δ+1)-edge-colorable");
    }
    let coloring = misra_gries(g);
    ChromaticIndex {
        value: coloring.count,
        lower_bound: delta,
        coloring,
        exact: false,
    }
}

/// Whether `edges` admit a proper `k`-coloring, by DFS with symmetry breaking
/// on first use of each color.
pub fn brute_force_colorable(edges: &[(usize, usize)], n: usize, k: usize) -> bool {
    color_with(edges, n, k).is_some()
}

fn color_with(edges: &[(usize, usize)], n: usize, k: usize) -> Option<Vec<usize>> {
    if edges.is_empty() {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut used = vec![0u64; n];
    let mut colors = vec![usize::MAX; edges.len()];
    assert!(k <= 64, "color count limited to 64");
    fn dfs(i: usize, edges: &[(usize, usize)], k: usize, top: usize, used: &mut [u64], colors: &mut [usize]) -> bool {
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        let busy = used[u] | used[v];
        for c in 0..k.min(top + 1) {
            if busy & (1 << c) != 0 {
                continue;
            }
            used[u] |= 1 << c;
            used[v] |= 1 << c;
            colors[i] = c;
            if dfs(i + 1, edges, k, top.max(c + 1), used, colors) {
                return true;
            }
            used[u] &= !(1 << c);
            used[v] &= !(1 << c);
        }
        false
    }
    dfs(0, edges, k, 0, &mut used, &mut colors).then_some(colors)
}

/// Misra-Gries edge coloring with at most `Δ+1` colors.
pub fn misra_gries(g: &WeightedGraph) -> EdgeColoring {
    let a = Adjacency::new(g);
    let n = a.n;
    let palette = a.max_degree() + 1;
    let mut col: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    let free = |col: &Vec<Vec<Option<usize>>>, v: usize, c: usize| a.nbrs[v].iter().all(|&w| col[v][w] != Some(c));
    let first_free = |col: &Vec<Vec<Option<usize>>>, v: usize| (0..palette).find(|&c| free(col, v, c)).unwrap();

    for e in g.edges() {
        let (u, v) = (e.k, e.l);
        // maximal fan of u starting at v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = a.nbrs[u]
                .iter()
                .copied()
                .find(|&w| !fan.contains(&w) && col[u][w].is_some_and(|c| free(&col, last, c)));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = first_free(&col, u);
        let d = first_free(&col, *fan.last().unwrap());

        // invert the cd-path starting at u
        if c != d {
            let mut path = Vec::new();
            let (mut x, mut want, mut prev) = (u, d, usize::MAX);
            loop {
                let step = a.nbrs[x]
                    .iter()
                    .copied()
                    .find(|&y| y != prev && col[x][y] == Some(want));
                match step {
                    Some(y) => {
                        path.push((x, y));
                        prev = x;
                        x = y;
                        want = if want == d { c } else { d };
                    }
                    None => break,
                }
            }
            for &(x, y) in &path {
                let flipped = if col[x][y] == Some(d) { c } else { d };
                col[x][y] = Some(flipped);
                col[y][x] = Some(flipped);
            }
        }

        // shortest fan prefix ending where d is free
        let mut w = 0;
        while w < fan.len() {
            let is_fan = (0..w).all(|i| col[u][fan[i + 1]].is_some_and(|ci| free(&col, fan[i], ci)));
            if !is_fan {
                w = fan.len();
                break;
            }
            if free(&col, fan[w], d) {
                break;
            }
            w += 1;
        }
        assert!(w < fan.len(), "Misra-Gries invariant violated");
        for i in 0..w {
            let ci = col[u][fan[i + 1]];
            col[u][fan[i]] = ci;
            col[fan[i]][u] = ci;
        }
        col[u][fan[w]] = Some(d);
        col[fan[w]][u] = Some(d);
    }

    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.k, e.l)).collect();
    let colors: Vec<usize> = edges.iter().map(|&(k, l)| col[k][l].unwrap()).collect();
    let count = compact(&colors);
    let mut remap = vec![usize::MAX; palette];
    let mut next = 0;
    let colors = colors
        .iter()
        .map(|&c| {
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
            remap[c]
        })
        .collect();
    EdgeColoring { edges, colors, count }
}

fn compact(colors: &[usize]) -> usize {
    let mut seen: Vec<usize> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// One level of the threshold-graph integral.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub from: f64,
    pub to: f64,
    pub chromatic: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedChromatic {
    pub value: f64,
    pub exact: bool,
    pub levels: Vec<Level>,
}

/// Distinct positive values, merged when within `1e-12` relative of each other.
pub(crate) fn norm_levels(mut norms: Vec<f64>) -> Vec<f64> {
    norms.retain(|&x| x > 0.0);
    norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::new();
    for x in norms {
        match out.last_mut() {
            Some(last) if (x - *last).abs() <= 1e-12 * x.abs().max(last.abs()) => *last = x,
            _ => out.push(x),
        }
    }
    out
}

/// `∫₀^∞ χ'(G_r) dr`, evaluated exactly as a sum over norm levels.
pub fn weighted_chromatic_index(h: &JMatrix, exact_limit: usize) -> WeightedChromatic {
    let norms: Vec<((usize, usize), f64)> = h.blocks().map(|(key, b)| (key, pair_norm(b, None))).collect();
    let levels = norm_levels(norms.iter().map(|(_, r)| *r).collect());
    let mut value = 0.0;
    let mut exact = true;
    let mut out = Vec::new();
    let mut from = 0.0;
    for &to in &levels {
        let edges: Vec<_> = norms
            .iter()
            .filter(|(_, r)| *r >= to * (1.0 - 1e-12))
            .map(|&((k, l), _)| (k, l, 1.0))
            .collect();
        let g = WeightedGraph::new(h.n(), edges).expect("J-matrix blocks form a valid graph");
        let chi = chromatic_index(&g, exact_limit);
        value += (to - from) * chi.value as f64;
        exact &= chi.exact;
        out.push(Level {
            from,
            to,
            chromatic: chi.value,
            exact: chi.exact,
        });
        from = to;
    }
    WeightedChromatic {
        value,
        exact,
        levels: out,
    }
}
