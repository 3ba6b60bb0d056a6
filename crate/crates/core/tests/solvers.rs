//! Cross-checks between the solvers and the brute-force oracles.

use proptest::prelude::*;
use rsnd_core::chain::{build_chain, check_structure};
use rsnd_core::reduction::DemandFunction;
use rsnd_core::rounding::{kefts_feasible, kefts_weighted, snd_jain};
use rsnd_core::rsnd::{rsnd2, rsnd3_single};
use rsnd_core::verify::{
    exact_opt, gen_random, verify_rsnd, DemandSpec, GenParams, Requirement, WeightSpec, DEFAULT_OPT_BUDGET,
};
use rsnd_core::{int, ratio, Demand, EdgeSet, Multigraph};

fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
    (3usize..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1i64..5), n..=max_m).prop_map(move |es| {
            let es: Vec<_> = es
                .into_iter()
                .filter(|(u, v, _)| u != v)
                .map(|(u, v, w)| (u, v, int(w)))
                .collect();
            Multigraph::weighted(n, &es).unwrap()
        })
    })
}

fn subset(g: &Multigraph, bits: u64) -> EdgeSet {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .map(|(_, e)| e.id)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn cut_oracle_matches_fault_enumeration(g in small_graph(6, 12), k in 1u32..5, bits in any::<u64>()) {
        let h = subset(&g, bits);
        prop_assert_eq!(
            kefts_feasible(&g, k, &h).unwrap(),
            verify_rsnd(&g, &h, &Requirement::AllPairs { k }).unwrap().is_none()
        );
    }

    #[test]
    fn whole_graph_is_always_feasible(g in small_graph(6, 12), ds in prop::collection::vec((0usize..6, 0usize..6, 1u32..4), 0..4)) {
        let n = g.node_count();
        let ds: Vec<Demand> = ds.into_iter().map(|(s, t, k)| Demand::new(s % n, t % n, k)).collect();
        prop_assert!(verify_rsnd(&g, &g.edge_ids(), &Requirement::Pairs(ds)).unwrap().is_none());
        prop_assert!(kefts_feasible(&g, 3, &g.edge_ids()).unwrap());
    }

    #[test]
    fn weighted_rounding_is_feasible_and_accounted(g in small_graph(6, 11), k in 2u32..4) {
        let (h, trace) = kefts_weighted(&g, k).unwrap();
        trace.check_accounting(&g).unwrap();
        let req = Requirement::AllPairs { k };
        prop_assert!(verify_rsnd(&g, &h, &req).unwrap().is_none());
        let (opt, _) = exact_opt(&g, &req, DEFAULT_OPT_BUDGET).unwrap();
        prop_assert!(opt <= g.weight_of(&h));
        prop_assert!(g.weight_of(&h) <= int(2) * opt);
    }

    #[test]
    fn rsnd2_within_two(g in small_graph(6, 11), ds in prop::collection::vec((0usize..6, 0usize..6, 1u32..3), 1..4)) {
        let n = g.node_count();
        let ds: Vec<Demand> = ds.into_iter()
            .map(|(s, t, k)| Demand::new(s % n, t % n, k))
            .filter(|d| d.s != d.t)
            .collect();
        let h = rsnd2(&g, &ds).unwrap();
        let req = Requirement::Pairs(ds);
        prop_assert!(verify_rsnd(&g, &h, &req).unwrap().is_none());
        let (opt, _) = exact_opt(&g, &req, DEFAULT_OPT_BUDGET).unwrap();
        prop_assert!(g.weight_of(&h) <= int(2) * opt);
    }

    #[test]
    fn rsnd3_on_general_graphs(g in small_graph(6, 12), s in 0usize..6, t in 0usize..6) {
        let n = g.node_count();
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let (h, _) = rsnd3_single(&g, s, t).unwrap();
        let req = Requirement::Pairs(vec![Demand::new(s, t, 3)]);
        prop_assert!(verify_rsnd(&g, &h, &req).unwrap().is_none());
        let (opt, _) = exact_opt(&g, &req, DEFAULT_OPT_BUDGET).unwrap();
        prop_assert!(g.weight_of(&h) <= ratio(27, 4) * opt);
    }
}

#[test]
fn rsnd3_output_satisfies_the_structure_conditions() {
    for seed in 0..40 {
        let inst = gen_random(&GenParams {
            planted_two_cut: true,
            demands: DemandSpec::Single(3),
            weights: WeightSpec::Integer { min: 1, max: 4 },
            seed,
            ..Default::default()
        })
        .unwrap();
        let g = &inst.graph;
        let d = inst.demands[0];
        let (h, trace) = rsnd3_single(g, d.s, d.t).unwrap();
        let chain = build_chain(g, d.s, d.t).unwrap().unwrap();
        assert!(check_structure(g, &h, &chain).unwrap().holds(), "seed {seed}");
        let block = &trace.blocks[0];
        assert_eq!(block.chain.as_ref(), Some(&chain));
        assert!(block.parts.iter().all(|p| p.steiner_pairs <= 4));
        let mut total = block.separator_cost.clone();
        for p in &block.parts {
            assert!(p.union <= &p.flow + &p.left_rsnd + &p.right_rsnd + &p.steiner);
            total += &p.union;
        }
        assert!(g.weight_of(&h) <= total);
    }
}

#[test]
fn snd_matches_rsnd2_on_two_edge_connected_graphs() {
    for seed in 0..30 {
        let inst = gen_random(&GenParams {
            n: 6,
            edge_probability: ratio(3, 4),
            demands: DemandSpec::Pairs { count: 3, max_k: 2 },
            seed,
            ..Default::default()
        })
        .unwrap();
        let g = &inst.graph;
        if g.connected_components().len() != 1 || !g.bridges_and_2ecc().tree_edges.is_empty() {
            continue;
        }
        let lifted = DemandFunction::from_demands(&inst.demands).to_demands();
        let (direct, _) = snd_jain(g, &lifted).unwrap();
        assert_eq!(rsnd2(g, &inst.demands).unwrap(), direct, "seed {seed}");
    }
}
