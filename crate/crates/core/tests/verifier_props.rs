mod common;

use proptest::prelude::*;
use rand::Rng;
use zzsim::planner::{optimal_zz_plan, two_qubit_plan};
use zzsim::verifier::{
    average_zz, product_certificate, schedule_unitary, trotter_scaling, unitary_distance, unitary_of, verify_zz,
    VerifyOptions,
};
use zzsim::{graph_to_jmatrix, Config, JMatrix, PairMatrix, Schedule, SignInterval, SignSchedule, WeightedGraph};

fn graph_strategy() -> impl Strategy<Value = WeightedGraph> {
    (2usize..8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
        prop::collection::vec(prop::option::of(-2.0f64..2.0), pairs.len()).prop_map(move |ws| {
            let edges = pairs.iter().zip(ws).filter_map(|(&(k, l), w)| w.map(|w| (l, k, w)));
            WeightedGraph::new(n, edges).unwrap()
        })
    })
}

fn schedule_strategy(n: usize) -> impl Strategy<Value = SignSchedule> {
    prop::collection::vec((prop::collection::vec(prop::bool::ANY, n), 0.01f64..1.0), 1..6).prop_map(move |ivs| {
        let intervals = ivs
            .into_iter()
            .map(|(bits, duration)| SignInterval {
                signs: bits.into_iter().map(|b| if b { 1 } else { -1 }).collect(),
                duration,
            })
            .collect();
        SignSchedule::new(n, intervals).unwrap()
    })
}

proptest! {
    #[test]
    fn graph_jmatrix_round_trip(g in graph_strategy()) {
        let back = graph_to_jmatrix(&g).zz_graph();
        prop_assert_eq!(back.n(), g.n());
        let nonzero: Vec<_> = g.edges().iter().filter(|e| e.w != 0.0).cloned().collect();
        prop_assert_eq!(back.edges(), &nonzero[..]);
        prop_assert_eq!(g.canonical().unwrap(), g.canonical().unwrap().canonical().unwrap());
    }

    #[test]
    fn global_flip_is_invisible(s in schedule_strategy(5)) {
        let drift = WeightedGraph::complete(5);
        let a = average_zz(&s, &drift).unwrap();
        let b = average_zz(&s.flipped(), &drift).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sign_schedules_are_exact_at_unitary_level(s in schedule_strategy(4)) {
        let drift = WeightedGraph::complete(4);
        let target = average_zz(&s, &drift).unwrap();
        let cfg = Config::default();
        for eps in [0.1, 1.0] {
            let u = schedule_unitary(&Schedule::Signs(s.clone()), &graph_to_jmatrix(&drift), eps, 1, &cfg).unwrap();
            let exact = unitary_of(&graph_to_jmatrix(&target), None, eps, &cfg).unwrap();
            prop_assert!(unitary_distance(&u, &exact) <= 1e-12);
        }
    }
}

#[test]
fn certificates_for_lp_schedules() {
    let mut rng = common::rng(51);
    let cfg = Config::default();
    for _ in 0..60 {
        let n = rng.gen_range(2..=7);
        let g = {
            let p = rng.gen_range(0.3..1.0);
            common::random_graph(&mut rng, n, p, false)
        };
        let lp = optimal_zz_plan(&g, &cfg).unwrap();
        if lp.mu == 0.0 {
            continue;
        }
        let cert = product_certificate(&lp.schedule, &g, 1e-9).unwrap();
        assert!(cert.deviation <= 1e-9 && cert.psd_ok);
        let w: f64 = cert.ensemble.terms.iter().map(|t| t.weight).sum();
        assert!((w - 1.0).abs() < 1e-12);
    }
}

#[test]
fn trotter_ratios_are_second_order() {
    let mut rng = common::rng(52);
    let cfg = Config::default();
    let drift = graph_to_jmatrix(&WeightedGraph::complete(2));
    for _ in 0..10 {
        let j = PairMatrix(std::array::from_fn(|_| {
            std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
        }));
        let locals = (
            [rng.gen_range(-1.0..1.0), 0.0, 0.5],
            [0.0, rng.gen_range(-1.0..1.0), 0.0],
        );
        let plan = two_qubit_plan(&j, Some(locals)).unwrap();
        let target = JMatrix::new(2, [((0, 1), j)]).unwrap();
        let t = trotter_scaling(
            &Schedule::Frames(plan.schedule),
            &drift,
            &target,
            &[0.2, 0.1, 0.05, 0.025],
            1,
            &cfg,
        )
        .unwrap();
        for r in t.ratios {
            let r = r.expect("non-commuting plan");
            assert!((3.2..=4.8).contains(&r), "ratio {r}");
        }
    }
}

#[test]
fn tampered_schedule_reports_mismatch() {
    let star = WeightedGraph::from_one_based(5, (2..=5).map(|l| (1, l, 1.0))).unwrap();
    let cfg = Config::default();
    let mut s = optimal_zz_plan(&star, &cfg).unwrap().schedule;
    let ok = verify_zz(
        &Schedule::Signs(s.clone()),
        &WeightedGraph::complete(5),
        &star,
        &VerifyOptions::default(),
        &cfg,
    )
    .unwrap();
    assert!(!ok.mismatch && ok.avg_hamiltonian_error <= 1e-9);
    s.intervals[0].duration += 0.01;
    let bad = verify_zz(
        &Schedule::Signs(s),
        &WeightedGraph::complete(5),
        &star,
        &VerifyOptions::default(),
        &cfg,
    )
    .unwrap();
    assert!(bad.mismatch && bad.avg_hamiltonian_error > 1e-3);
}
