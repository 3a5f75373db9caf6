//! Cross-module invariants: properties that tie the filter characterization,
//! the exact solvers, the constructions and the bound machinery together.

use num::bigint::BigInt;
use num::rational::BigRational;
use proptest::prelude::*;

use shiftlab_core::bounds::f_exact;
use shiftlab_core::construct::{build_mnd, BlockParams};
use shiftlab_core::graph::{shortest_odd_cycle, OrderedGraph};
use shiftlab_core::independence::{
    color_filter, derandomized_quarter, exact_alpha_k2, is_independent_subgraph, Coloring,
    Palette, SearchBudget,
};
use shiftlab_core::ratio::ratio;
use shiftlab_core::tuple::KTupleSet;

fn arb_graph(max_n: u32) -> impl Strategy<Value = OrderedGraph> {
    (4u32..=max_n).prop_flat_map(|n| {
        let pairs = (n * (n - 1) / 2) as usize;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |include| {
            let mut g = OrderedGraph::empty(n);
            let mut idx = 0;
            for i in 1..n {
                for j in i + 1..=n {
                    if include[idx] {
                        g.insert_edge(i, j).unwrap();
                    }
                    idx += 1;
                }
            }
            g
        })
    })
}

fn arb_graph_with_coloring(max_n: u32) -> impl Strategy<Value = (OrderedGraph, Coloring)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        prop::collection::vec(0u8..2, n as usize)
            .prop_map(move |colors| (g.clone(), Coloring::new(Palette::TwoBr, colors).unwrap()))
    })
}

proptest! {
    #[test]
    fn filter_output_is_independent((g, c) in arb_graph_with_coloring(16)) {
        let filtered = color_filter(&g, &c).unwrap();
        prop_assert!(is_independent_subgraph(&g, &filtered).unwrap());
    }

    #[test]
    fn tuple_set_graph_round_trip(g in arb_graph(16)) {
        let set = KTupleSet::from_ordered_graph(&g);
        prop_assert_eq!(set.to_ordered_graph().unwrap(), g);
    }

    #[test]
    fn exact_alpha_meets_the_quarter_floor(g in arb_graph(12)) {
        prop_assume!(!g.is_empty());
        let res = exact_alpha_k2(&g, SearchBudget::default()).unwrap();
        prop_assert!(res.optimal);
        // alpha(Sh[G]) >= |G|/4, integer form
        prop_assert!(res.value * 4 >= g.edge_count() as u64);
        // and the derandomized set never beats the exact optimum
        let derand = derandomized_quarter(&g).unwrap();
        prop_assert!(derand.edge_count() as u64 <= res.value);
    }
}

#[test]
fn alpha_equals_best_f_over_beta() {
    // max over beta of f_exact / d must equal alpha / |G|
    for (n, d, seed) in [(8u32, 2u32, 7u64), (16, 2, 7), (8, 3, 11)] {
        let inst = build_mnd(&BlockParams::new(n, d, ratio(1, 2), seed).unwrap(), 4).unwrap();
        let alpha = exact_alpha_k2(&inst.graph, SearchBudget::default()).unwrap();
        assert!(alpha.optimal);
        let alpha_ratio = BigRational::new(
            BigInt::from(alpha.value),
            BigInt::from(inst.graph.edge_count()),
        );
        let best_f = (0..=u64::from(n))
            .map(|beta| f_exact(&inst, beta, SearchBudget::default()).unwrap().value)
            .max()
            .unwrap();
        assert_eq!(
            best_f / BigRational::from_integer(BigInt::from(d)),
            alpha_ratio,
            "mismatch at n={n} d={d}"
        );
    }
}

#[test]
fn odd_girth_is_2k_plus_1_at_desk_scale() {
    for n in 5..=8u32 {
        assert_eq!(shortest_odd_cycle(n, 2).unwrap(), Some(5), "k=2, n={n}");
    }
    for n in 7..=9u32 {
        assert_eq!(shortest_odd_cycle(n, 3).unwrap(), Some(7), "k=3, n={n}");
    }
    // below the first odd cycle the graphs are bipartite
    assert_eq!(shortest_odd_cycle(3, 2).unwrap(), None);
    assert_eq!(shortest_odd_cycle(4, 2).unwrap(), None);
    for n in 4..=6u32 {
        assert_eq!(shortest_odd_cycle(n, 3).unwrap(), None, "k=3, n={n}");
    }
}

#[test]
fn instances_serialize_deterministically() {
    let params = BlockParams::new(16, 3, ratio(1, 2), 99).unwrap();
    let a = serde_json::to_string(&build_mnd(&params, 4).unwrap()).unwrap();
    let b = serde_json::to_string(&build_mnd(&params, 4).unwrap()).unwrap();
    assert_eq!(a, b);
    // and the JSON round-trips to the same instance
    let inst: shiftlab_core::construct::MndInstance = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string(&inst).unwrap(), a);
}
