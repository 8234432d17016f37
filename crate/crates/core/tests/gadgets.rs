use udvg::coloring::{enumerate_3colorings, solve_3coloring, PartialColoring};
use udvg::error::Error;
use udvg::gadgets::*;
use udvg::geometry::{int, sq_dist, ThresholdPolicy};
use udvg::visibility::{graph_diff, udvg, visibility, Scene};

fn assert_realized(f: &GadgetFixture) {
    f.scene.validate().unwrap();
    let g = udvg(&f.scene).unwrap();
    let d = graph_diff(&g, &f.reference).unwrap();
    assert!(d.is_empty(), "{}: {}", f.name, d.describe(&f.reference));
}

#[test]
fn every_fixture_realizes_its_reference() {
    for name in fixture_names() {
        let fixtures = fixtures_named(name).unwrap();
        assert!(!fixtures.is_empty(), "{name}");
        for f in &fixtures {
            assert_realized(f);
            for (role, &v) in &f.anchors {
                assert!(v < f.reference.n, "{}: anchor {role} out of range", f.name);
            }
        }
    }
    assert!(matches!(fixtures_named("nope"), Err(Error::BadParameter(_))));
}

#[test]
fn crossing_graph_shape() {
    let g = crossing_gadget_graph();
    assert_eq!(g.n, 18);
    let f = g.vertex("f").unwrap();
    assert_eq!(g.degree(f), 4);
    let mut nf: Vec<String> = g.adjacency()[f].iter().map(|&v| g.label(v)).collect();
    nf.sort();
    assert_eq!(nf, ["d", "e", "g", "i"]);
}

#[test]
fn crossing_has_two_colorings_transferring_both_pairs() {
    let g = crossing_gadget_graph();
    let canon = enumerate_3colorings(&g, true).unwrap();
    assert_eq!(canon.len(), 2);
    assert_eq!(enumerate_3colorings(&g, false).unwrap().len(), 12);
    let v = |s: &str| g.vertex(s).unwrap();
    for c in &canon {
        assert_eq!(c[v("a")], c[v("r")]);
        assert_eq!(c[v("h")], c[v("o")]);
    }
}

#[test]
fn crossing_segments_touch_exactly_at_unit_distance() {
    let f = crossing_gadget_segments();
    let pts = f.scene.vertices();
    let (a, b) = (f.anchor("a"), f.anchor("b"));
    assert_eq!(sq_dist(&pts[a], &pts[b]), int(1));
    let strict = visibility(&f.scene, ThresholdPolicy::Strict).unwrap();
    assert!(!strict.has_edge(a, b));
    assert!(udvg(&f.scene).unwrap().has_edge(a, b));
    let anchors: std::collections::BTreeSet<usize> = ["a", "r", "h", "o"].iter().map(|s| f.anchor(s)).collect();
    assert_eq!(anchors.len(), 4);
}

#[test]
fn long_edge_is_unique_with_period_three() {
    for pairs in 1..=6 {
        let f = long_edge_segments(pairs).unwrap();
        let Scene::Segments(s) = &f.scene else { panic!() };
        assert_eq!(s.len(), 2 * pairs);
        let all = enumerate_3colorings(&f.reference, true).unwrap();
        assert_eq!(all.len(), 1, "pairs={pairs}");
        let c = &all[0];
        for row in 0..2 {
            for i in 0..(2 * pairs).saturating_sub(3) {
                let x = f.anchor(&format!("row{row}[{i}]"));
                let y = f.anchor(&format!("row{row}[{}]", i + 3));
                assert_eq!(c[x], c[y], "pairs={pairs} row={row} i={i}");
            }
        }
    }
    assert!(matches!(long_edge_segments(0), Err(Error::BadParameter(_))));
}

#[test]
fn clause_truth_table() {
    let f = clause_gadget();
    let g = udvg(&f.scene).unwrap();
    let (x, y, z) = (f.anchor("x"), f.anchor("y"), f.anchor("z"));
    let mut sat = 0;
    for bits in 0..8u8 {
        let cols = [bits & 1, bits >> 1 & 1, bits >> 2 & 1];
        let pre = PartialColoring::from([(x, cols[0]), (y, cols[1]), (z, cols[2])]);
        let colorable = solve_3coloring(&g, &pre).is_some();
        let nae = !(cols[0] == cols[1] && cols[1] == cols[2]);
        assert_eq!(colorable, nae, "{cols:?}");
        sat += colorable as usize;
    }
    assert_eq!(sat, 6);
    assert!(solve_3coloring(&g, &PartialColoring::new()).is_some());
    let pts = f.scene.vertices();
    let inner = ["x'", "y'", "z'"].map(|s| f.anchor(s));
    let outer = ["x", "y", "z"].map(|s| f.anchor(s));
    let one = int(1);
    for i in 0..3 {
        for j in (i + 1)..3 {
            assert!(sq_dist(&pts[inner[i]], &pts[inner[j]]) <= one);
            assert!(sq_dist(&pts[outer[i]], &pts[outer[j]]) > one);
        }
    }
}

#[test]
fn corridor_separates_its_ends() {
    for k in [3, 6, 9] {
        let f = corridor(k).unwrap();
        let (u, v) = (f.anchor("u"), f.anchor("v"));
        let all = enumerate_3colorings(&f.reference, false).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|c| c[u] != c[v]), "k={k}");
        let inner: Vec<(usize, usize)> = f.reference.edges().filter(|&(a, b)| ![a, b].contains(&u) && ![a, b].contains(&v)).collect();
        let on_chain = |a: usize, b: usize| {
            let (la, lb) = (f.reference.label(a), f.reference.label(b));
            la[..1] == lb[..1]
        };
        assert_eq!(inner.iter().filter(|&&(a, b)| on_chain(a, b)).count(), 2 * k - 2);
        assert_eq!(inner.iter().filter(|&&(a, b)| !on_chain(a, b)).count(), 2 * k - 1);
    }
    for k in [0, 4, 5] {
        assert!(matches!(corridor(k), Err(Error::BadParameter(_))));
    }
}

#[test]
fn chamber_structure() {
    let f = chamber();
    assert_eq!(f.reference.n, 12);
    let c = f.anchor("center");
    let g = udvg(&f.scene).unwrap();
    for d in ["E", "N", "W", "S"] {
        assert!(g.has_edge(c, f.anchor(&format!("a{d}"))), "a{d}");
        assert!(g.has_edge(c, f.anchor(&format!("b{d}"))), "b{d}");
        assert!(g.has_edge(f.anchor(&format!("a{d}")), f.anchor(&format!("b{d}"))), "{d}");
    }
    for d in ["E", "N", "W"] {
        assert!(!g.has_edge(c, f.anchor(&format!("k{d}"))), "k{d}");
        assert_eq!(g.degree(f.anchor(&format!("k{d}"))), 2);
    }
    assert_eq!(g.degree(c), 8);
}

#[test]
fn point_crossing_transfers_both_pairs() {
    let f = point_gadget("crossing").unwrap();
    assert_eq!(f.reference.n, 13);
    let all = enumerate_3colorings(&f.reference, false).unwrap();
    assert!(!all.is_empty());
    let v = |s: &str| f.anchor(s);
    for c in &all {
        assert_eq!(c[v("a")], c[v("m")]);
        assert_eq!(c[v("e")], c[v("i")]);
    }
}

#[test]
fn point_long_edge_carries_one_color() {
    let f = point_gadget("long_edge").unwrap();
    let all = enumerate_3colorings(&f.reference, true).unwrap();
    // Each of the two side triangles {5,6} and {9,10} may swap its pair.
    assert_eq!(all.len(), 4);
    for c in &all {
        for s in ["4", "7", "8", "11"] {
            assert_eq!(c[f.anchor("1")], c[f.anchor(s)]);
        }
    }
}

#[test]
fn point_clause_truth_table() {
    let f = point_gadget("clause").unwrap();
    let g = udvg(&f.scene).unwrap();
    let ins = ["x", "y", "z"].map(|s| f.anchor(s));
    let sat = (0..8u8)
        .filter(|bits| {
            let pre: PartialColoring = ins.iter().enumerate().map(|(i, &v)| (v, bits >> i & 1)).collect();
            let ok = solve_3coloring(&g, &pre).is_some();
            assert_eq!(ok, *bits != 0 && *bits != 7);
            ok
        })
        .count();
    assert_eq!(sat, 6);
    assert!(matches!(point_gadget("triangle"), Err(Error::BadParameter(_))));
}

#[test]
fn k16_segment_apex_sees_only_partner() {
    let f = &k16_fixtures()[1];
    let g = udvg(&f.scene).unwrap();
    let u = f.anchor("leaf6");
    assert_eq!(g.adjacency()[u], vec![f.anchor("center")]);
    let pts = f.scene.vertices();
    let far = pts.iter().enumerate().filter(|(i, _)| *i != u && *i != f.anchor("center")).all(|(_, p)| sq_dist(p, &pts[u]) > int(1));
    assert!(far);
}
