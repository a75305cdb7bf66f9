mod common;

use rand::Rng;
use zzsim::graphops::{
    bipartition, chromatic_index, clique_coloring_index, connected_components, misra_gries, threshold_graph,
    weighted_chromatic_index, Bipartition,
};
use zzsim::linalg::sym_eig;
use zzsim::{graph_to_jmatrix, JMatrix, PairMatrix, WeightedGraph};

/// Minimum number of matchings covering the edge set, by DP over subsets.
fn chromatic_index_dp(g: &WeightedGraph) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.k, e.l)).collect();
    let m = edges.len();
    let full = (1usize << m) - 1;
    let is_matching = |mask: usize| {
        let mut used = 0u64;
        for (i, &(k, l)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used >> k & 1 == 1 || used >> l & 1 == 1 {
                    return false;
                }
                used |= 1 << k | 1 << l;
            }
        }
        true
    };
    let matchings: Vec<usize> = (1..=full).filter(|&s| is_matching(s)).collect();
    let mut dp = vec![usize::MAX; full + 1];
    dp[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        for &mt in &matchings {
            if mt & low != 0 && mt & !s == 0 && dp[s & !mt] != usize::MAX {
                dp[s] = dp[s].min(dp[s & !mt] + 1);
            }
        }
    }
    dp[full]
}

#[test]
fn exact_chromatic_index_matches_subset_dp() {
    let mut rng = common::rng(21);
    let mut checked = 0;
    while checked < 150 {
        let n = rng.gen_range(2..=8);
        let g = {
            let p = rng.gen_range(0.2..0.9);
            common::random_graph(&mut rng, n, p, true)
        };
        if g.edge_count() == 0 || g.edge_count() > 12 {
            continue;
        }
        let ci = chromatic_index(&g, 12);
        assert!(ci.exact);
        assert!(ci.coloring.is_valid());
        assert_eq!(ci.value, chromatic_index_dp(&g), "{:?}", g.edges());
        assert_eq!(ci.coloring.count, ci.value);
        checked += 1;
    }
}

#[test]
fn small_complete_graphs() {
    assert_eq!(chromatic_index(&WeightedGraph::complete(3), 12).value, 3);
    assert_eq!(chromatic_index(&WeightedGraph::complete(4), 12).value, 3);
    assert_eq!(chromatic_index_dp(&WeightedGraph::complete(4)), 3);
    assert_eq!(chromatic_index(&WeightedGraph::complete(5), 12).value, 5);
}

#[test]
fn misra_gries_uses_at_most_delta_plus_one() {
    let mut rng = common::rng(22);
    for _ in 0..200 {
        let n = rng.gen_range(2..=14);
        let g = {
            let p = rng.gen_range(0.1..1.0);
            common::random_graph(&mut rng, n, p, true)
        };
        let c = misra_gries(&g);
        assert!(c.is_valid());
        let delta = (0..n)
            .map(|v| g.edges().iter().filter(|e| e.k == v || e.l == v).count())
            .max()
            .unwrap();
        assert!(c.count <= delta + 1);
    }
}

#[test]
fn connected_graph_spectral_facts() {
    let mut rng = common::rng(23);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let g = {
            let p = rng.gen_range(0.0..0.8);
            common::random_connected(&mut rng, n, p)
        };
        assert_eq!(connected_components(&g).len(), 1);
        let spec = sym_eig(&g.adjacency(), 1e-12).unwrap();
        let (r, q) = (spec.largest().unwrap(), spec.smallest().unwrap());
        assert!(r >= 1.0 - 1e-9 && r <= (n - 1) as f64 + 1e-9, "r = {r}");
        assert!(q >= -r - 1e-9 && q <= -1.0 + 1e-9, "q = {q}");
    }
}

#[test]
fn threshold_examples() {
    let g = WeightedGraph::complete(4);
    let j = graph_to_jmatrix(&g);
    assert_eq!(threshold_graph(&j, 0.0).unwrap().edge_count(), 6);
    assert_eq!(threshold_graph(&j, 1.0).unwrap().edge_count(), 0);
    let h = JMatrix::new(
        3,
        [
            ((0, 1), PairMatrix::zz(2.0)),
            ((1, 2), PairMatrix::diag([1.0, 1.0, 1.0])),
        ],
    )
    .unwrap();
    let t = threshold_graph(&h, 2.5).unwrap();
    assert_eq!(t.support(), vec![(1, 2)]);
    assert!(threshold_graph(&h, -1.0).is_err());
}

#[test]
fn weighted_chromatic_index_integrates_levels() {
    // star with norms 1, 2, 3: level (0,1] has χ'=3, (1,2] has 2, (2,3] has 1
    let h = graph_to_jmatrix(&WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, -2.0), (0, 3, 3.0)]).unwrap());
    let w = weighted_chromatic_index(&h, 12);
    assert!((w.value - 6.0).abs() < 1e-9);
    assert!(w.exact);
}

#[test]
fn bipartition_and_clique_examples() {
    let path = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
    match bipartition(&path) {
        Bipartition::Parts { x, y } => {
            assert_eq!(x, vec![0, 2]);
            assert_eq!(y, vec![1, 3]);
        }
        other => panic!("{other:?}"),
    }
    match bipartition(&WeightedGraph::complete(5)) {
        Bipartition::OddCycle(c) => assert_eq!(c.len() % 2, 1),
        other => panic!("{other:?}"),
    }
    let star = WeightedGraph::new(5, (1..5).map(|l| (0, l, 1.0))).unwrap();
    let cc = clique_coloring_index(&star, 12);
    assert_eq!(cc.index, 4);
    assert!(cc.witness.is_valid(&star));
}

#[test]
fn clique_colorings_are_valid_on_random_graphs() {
    let mut rng = common::rng(24);
    for _ in 0..60 {
        let n = rng.gen_range(2..=7);
        let g = {
            let p = rng.gen_range(0.2..0.9);
            common::random_graph(&mut rng, n, p, true)
        };
        let cc = clique_coloring_index(&g, 12);
        assert!(cc.witness.is_valid(&g));
        if g.edge_count() > 0 {
            assert!(cc.index >= 1);
        }
        // never worse than coloring single edges
        assert!(cc.index <= chromatic_index(&g, 12).value);
    }
}
