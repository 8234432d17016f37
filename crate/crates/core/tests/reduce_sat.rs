use num_bigint::BigInt;
use proptest::prelude::*;
use udvg::coloring::{solve_3coloring, verify_coloring, PartialColoring};
use udvg::error::Error;
use udvg::reduce_sat::*;
use udvg::visibility::{graph_diff, udvg, Scene};

fn formula(n: usize, clauses: &[[usize; 3]]) -> Formula {
    Formula::new(n, clauses.to_vec()).unwrap()
}

/// Compiles, checks the realized graph, solves, and decodes.
fn run(f: &Formula) -> Option<Assignment> {
    let c = compile_with_intended(f);
    c.scene.validate().unwrap();
    let g = udvg(&c.scene).unwrap();
    let diff = graph_diff(&g, &c.intended).unwrap();
    assert!(diff.is_empty(), "realized graph differs: {}", diff.describe(&g));
    let col = solve_3coloring(&g, &PartialColoring::new())?;
    assert!(verify_coloring(&g, &col).unwrap());
    Some(decode_assignment(f, &c.certificate, &col).unwrap())
}

fn segment_count(s: &Scene) -> usize {
    match s {
        Scene::Segments(v) => v.len(),
        _ => panic!("expected a segment scene"),
    }
}

#[test]
fn oracle_examples() {
    assert!(nae3sat_oracle(&formula(3, &[[0, 1, 2]])).unwrap().is_some());
    assert!(nae3sat_oracle(&formula(1, &[[0, 0, 0]])).unwrap().is_none());
    let f = formula(4, &[[0, 2, 3], [0, 1, 3], [1, 2, 3]]);
    let a = nae3sat_oracle(&f).unwrap().unwrap();
    assert!(f.satisfied_by(&a));
    assert!(f.satisfied_by(&[true, true, false, false]));
}

#[test]
fn oracle_refuses_large_formulas() {
    let f = formula(ORACLE_MAX_VARS + 1, &[]);
    assert!(matches!(nae3sat_oracle(&f), Err(Error::TooLargeToEnumerate(25, 24))));
}

#[test]
fn parse_round_trip_and_errors() {
    let text = "c example\np nae3sat 4 3\n1 3 4\n1 2 4\n2 3 4\n";
    let f = Formula::parse(text).unwrap();
    assert_eq!(f, formula(4, &[[0, 2, 3], [0, 1, 3], [1, 2, 3]]));
    assert_eq!(Formula::parse(&f.to_text()).unwrap(), f);
    for bad in ["p cnf 3 1\n1 2 3\n", "p nae3sat 3 2\n1 2 3\n", "p nae3sat 3 1\n1 2\n", "p nae3sat 3 1\n0 1 2\n", "p nae3sat 2 1\n1 2 3\n"] {
        assert!(Formula::parse(bad).is_err(), "{bad:?} should not parse");
    }
}

#[test]
fn sample_formula_end_to_end() {
    let f = formula(4, &[[0, 2, 3], [0, 1, 3], [1, 2, 3]]);
    let a = run(&f).expect("satisfiable formula must give a colorable scene");
    assert!(f.satisfied_by(&a));
}

#[test]
fn all_equal_clause_is_uncolorable() {
    assert!(run(&formula(1, &[[0, 0, 0]])).is_none());
    assert!(run(&formula(2, &[[1, 1, 1], [0, 1, 0]])).is_none());
}

#[test]
fn clauseless_formula_compiles() {
    let f = formula(1, &[]);
    let a = run(&f).unwrap();
    assert_eq!(a.len(), 1);
    assert!(run(&formula(3, &[])).is_some());
}

#[test]
fn permuted_witness_decodes_to_same_or_complement() {
    let f = formula(3, &[[0, 1, 2], [0, 0, 1]]);
    let (scene, cert) = compile_nae3sat(&f);
    let g = udvg(&scene).unwrap();
    let col = solve_3coloring(&g, &PartialColoring::new()).unwrap();
    let base = decode_assignment(&f, &cert, &col).unwrap();
    for perm in [[0u8, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let p: Vec<u8> = col.iter().map(|&c| perm[c as usize]).collect();
        let a = decode_assignment(&f, &cert, &p).unwrap();
        let comp: Vec<bool> = base.iter().map(|b| !b).collect();
        assert!(a == base || a == comp);
        assert!(f.satisfied_by(&a));
    }
}

#[test]
fn corrupt_witnesses_are_rejected() {
    let f = formula(2, &[[0, 1, 1]]);
    let (scene, cert) = compile_nae3sat(&f);
    let n = scene.vertices().len();
    let mut col = vec![0u8; n];
    col[cert.neutral_anchor] = 2;
    col[cert.variable_anchor[1]] = 2;
    assert!(matches!(decode_assignment(&f, &cert, &col), Err(Error::CorruptWitness(_))));
    assert!(matches!(decode_assignment(&f, &cert, &col[..cert.neutral_anchor]), Err(Error::CorruptWitness(_))));
}

#[test]
fn certificate_anchors_are_valid_and_distinct() {
    let f = formula(3, &[[0, 1, 2], [2, 2, 0], [1, 0, 1]]);
    let (scene, cert) = compile_nae3sat(&f);
    let n = scene.vertices().len();
    let mut all: Vec<usize> = cert.variable_anchor.clone();
    all.extend(cert.clause_anchor.iter().flatten());
    all.push(cert.neutral_anchor);
    for r in &cert.crossing_registry {
        all.extend([r.a, r.r, r.h, r.o]);
    }
    assert!(all.iter().all(|&v| v < n));
    let len = all.len();
    all.sort_unstable();
    all.dedup();
    assert_eq!(all.len(), len);
    // Crossings happen where a later variable's wire meets an earlier drop.
    let expected: usize = f.clauses.iter().flatten().map(|&v| f.num_vars - 1 - v).sum();
    assert_eq!(cert.crossing_registry.len(), expected);
}

#[test]
fn compilation_is_deterministic() {
    let f = formula(3, &[[0, 1, 2], [1, 2, 2]]);
    assert_eq!(compile_nae3sat(&f), compile_nae3sat(&f));
}

const SEGMENT_CONSTANT: usize = 150;

fn small_formula() -> impl Strategy<Value = Formula> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec([0..n, 0..n, 0..n], 0..=4).prop_map(move |cl| Formula::new(n, cl).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn equisatisfiable_with_sound_decoding(f in small_formula()) {
        let expect = nae3sat_oracle(&f).unwrap().is_some();
        let got = run(&f);
        prop_assert_eq!(got.is_some(), expect);
        if let Some(a) = got {
            prop_assert!(f.satisfied_by(&a));
        }
    }

    #[test]
    fn size_and_precision_bounds(f in small_formula()) {
        let (scene, _) = compile_nae3sat(&f);
        let m = f.clauses.len();
        if m > 0 {
            prop_assert!(segment_count(&scene) <= SEGMENT_CONSTANT * (m + f.num_vars * m));
        }
        let cap = BigInt::from(1u32 << 16);
        for p in scene.vertices() {
            prop_assert!(*p.x.denom() <= cap && *p.y.denom() <= cap);
        }
    }
}
