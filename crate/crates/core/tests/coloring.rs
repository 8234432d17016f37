use proptest::prelude::*;
use udvg::coloring::*;
use udvg::visibility::Graph;

fn graph(n: usize, bits: &[bool]) -> Graph {
    let pairs = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::from_edges(n, pairs.zip(bits).filter(|(_, &b)| b).map(|(e, _)| e))
}

fn extends(c: &[u8], pre: &PartialColoring) -> bool {
    pre.iter().all(|(&v, &k)| c[v] == k)
}

fn arb_case() -> impl Strategy<Value = (Graph, PartialColoring)> {
    (1usize..=11, 0.0f64..0.7).prop_flat_map(|(n, p)| {
        let m = n * (n - 1) / 2;
        (
            proptest::collection::vec(proptest::bool::weighted(p), m),
            proptest::collection::btree_map(0..n, 0u8..3, 0..=3),
        )
            .prop_map(move |(bits, pre)| (graph(n, &bits), pre))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn solver_agrees_with_enumeration((g, pre) in arb_case()) {
        let all = enumerate_3colorings_capped(&g, false, 64).unwrap();
        let expected = all.iter().any(|c| extends(c, &pre));
        match solve_3coloring(&g, &pre) {
            Some(c) => {
                prop_assert!(expected);
                prop_assert!(verify_coloring(&g, &c).unwrap());
                prop_assert!(extends(&c, &pre));
            }
            None => prop_assert!(!expected),
        }
    }

    #[test]
    fn status_invariant_under_relabeling((g, pre) in arb_case(), perm in Just([0u8, 1, 2]).prop_shuffle()) {
        let moved: PartialColoring = pre.iter().map(|(&v, &c)| (v, perm[c as usize])).collect();
        prop_assert_eq!(solve_3coloring(&g, &pre).is_some(), solve_3coloring(&g, &moved).is_some());
    }

    #[test]
    fn solver_is_deterministic((g, pre) in arb_case()) {
        prop_assert_eq!(solve_3coloring(&g, &pre), solve_3coloring(&g, &pre));
    }

    #[test]
    fn canonical_enumeration_is_a_quotient((g, _pre) in arb_case()) {
        let all = enumerate_3colorings_capped(&g, false, 64).unwrap();
        let canon = enumerate_3colorings_capped(&g, true, 64).unwrap();
        let mut forms: Vec<Coloring> = all.iter().map(|c| canonical_form(c)).collect();
        forms.sort();
        forms.dedup();
        prop_assert_eq!(forms, canon);
    }
}

#[test]
fn wheel_and_odd_cycles() {
    // Odd wheel W5 needs four colors, even wheel W4 needs three.
    let wheel = |k: usize| {
        let mut e: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        e.extend((0..k).map(|i| (i, k)));
        Graph::from_edges(k + 1, e)
    };
    assert!(solve_3coloring(&wheel(5), &PartialColoring::new()).is_none());
    assert!(solve_3coloring(&wheel(4), &PartialColoring::new()).is_some());
}
