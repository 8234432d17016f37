//! Gadget fixtures: each scene is paired with the abstract graph it must realize
//! as a unit disk visibility graph, plus named anchor vertices.

use std::collections::BTreeMap;

use crate::coloring::{enumerate_3colorings, solve_3coloring, PartialColoring};
use crate::error::{Error, Result};
use crate::lemmas::{find_induced_k16, is_induced_k16};
use crate::geometry::{rat, Point, Polygon, Segment};
use crate::reduce_poly::{compile_layout, PlanarInput, PlanarVertex};
use crate::visibility::{graph_diff, udvg, Graph, Scene};

#[derive(Clone, Debug)]
pub struct GadgetFixture {
    pub name: String,
    pub scene: Scene,
    pub reference: Graph,
    pub anchors: BTreeMap<String, usize>,
}

impl GadgetFixture {
    pub fn anchor(&self, role: &str) -> usize {
        *self.anchors.get(role).unwrap_or_else(|| panic!("{} has no anchor {role}", self.name))
    }
}

fn seg(a: Point, b: Point) -> Segment {
    Segment::new(a, b).expect("fixture segment has distinct endpoints")
}

fn label_all(g: &mut Graph, names: &[String]) {
    g.labels = names.iter().cloned().enumerate().collect();
}

fn pts(coords: &[(&str, &str)]) -> Vec<Point> {
    coords.iter().map(|(x, y)| Point::dec(x, y)).collect()
}

fn anchors_from(names: &[&str]) -> BTreeMap<String, usize> {
    names.iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect()
}

/// Square of the path through `seq`: consecutive and next-but-one vertices adjacent.
pub fn square_path_edges(seq: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &u) in seq.iter().enumerate() {
        for &v in seq.iter().skip(i + 1).take(2) {
            out.push((u, v));
        }
    }
    out
}

pub const CROSSING_LABELS: [&str; 18] =
    ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r"];

/// Segment pairs of the crossing gadget; vertex `2i`, `2i+1` form segment `i`.
pub(crate) const CROSSING_SEGMENT_EDGES: [(&str, &str); 9] =
    [("a", "b"), ("c", "d"), ("e", "f"), ("g", "h"), ("i", "j"), ("k", "l"), ("m", "n"), ("o", "p"), ("q", "r")];

pub(crate) const CROSSING_SIGHT_EDGES: [(&str, &str); 25] = [
    ("a", "c"),
    ("a", "d"),
    ("b", "g"),
    ("b", "h"),
    ("c", "n"),
    ("d", "e"),
    ("d", "f"),
    ("d", "g"),
    ("e", "k"),
    ("e", "n"),
    ("e", "i"),
    ("f", "g"),
    ("f", "i"),
    ("g", "i"),
    ("h", "j"),
    ("i", "l"),
    ("j", "l"),
    ("k", "n"),
    ("k", "p"),
    ("k", "q"),
    ("k", "r"),
    ("l", "q"),
    ("m", "p"),
    ("m", "o"),
    ("n", "p"),
];

/// The 18-vertex crossing graph, which carries color a→r and h→o.
pub fn crossing_gadget_graph() -> Graph {
    let edges: Vec<(&str, &str)> = CROSSING_SEGMENT_EDGES.iter().chain(CROSSING_SIGHT_EDGES.iter()).copied().collect();
    Graph::from_named(&CROSSING_LABELS, &edges)
}

pub(crate) const CROSSING_COORDS: [(&str, &str); 18] = [
    ("0", "2.1"),
    ("0.6", "2.9"),
    ("0.4", "1.3"),
    ("0.6", "1.7"),
    ("1.4", "1.5"),
    ("1.4", "2.1"),
    ("1.2", "2.5"),
    ("1.4", "3.4"),
    ("1.85", "2.15"),
    ("2.1", "3"),
    ("2.2", "1.2"),
    ("2.2", "2.2"),
    ("1.3", "0.4"),
    ("1.3", "0.9"),
    ("2", "0"),
    ("2", "0.6"),
    ("2.7", "1.4"),
    ("3.1", "1.4"),
];

pub fn crossing_segments() -> Vec<Segment> {
    CROSSING_COORDS
        .chunks(2)
        .map(|c| seg(Point::dec(c[0].0, c[0].1), Point::dec(c[1].0, c[1].1)))
        .collect()
}

pub fn crossing_gadget_segments() -> GadgetFixture {
    GadgetFixture {
        name: "crossing".into(),
        scene: Scene::Segments(crossing_segments()),
        reference: crossing_gadget_graph(),
        anchors: CROSSING_LABELS.iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect(),
    }
}

/// Two staggered rows of `pairs` horizontal segments each. Segments are 9/10
/// long at pitch 19/10, and the second row is shifted by (1/5, 1/5). Vertex
/// `4i`, `4i+1` is segment `i` of row 0 and `4i+2`, `4i+3` segment `i` of row 1;
/// the graph is the square of the path `4i, 4i+2, 4i+1, 4i+3, ...`.
pub fn long_edge_segments(pairs: usize) -> Result<GadgetFixture> {
    if pairs < 1 {
        return Err(Error::BadParameter("long edge needs at least one segment per row".into()));
    }
    let h = |v: i64| rat(v, 100);
    let mut segs = Vec::new();
    let mut order = Vec::new();
    let mut names = Vec::new();
    let mut anchors = BTreeMap::new();
    for i in 0..pairs {
        let x = 190 * i as i64;
        segs.push(seg(Point::new(h(x), h(0)), Point::new(h(x + 90), h(0))));
        segs.push(seg(Point::new(h(x + 20), h(20)), Point::new(h(x + 110), h(20))));
        let b = 4 * i;
        order.extend([b, b + 2, b + 1, b + 3]);
        for (row, off) in [(0, 0), (1, 2)] {
            for end in 0..2 {
                let name = format!("row{row}[{}]", 2 * i + end);
                anchors.insert(name.clone(), b + off + end);
            }
        }
    }
    names.resize(4 * pairs, String::new());
    for (k, v) in &anchors {
        names[*v] = k.clone();
    }
    let mut reference = Graph::from_edges(4 * pairs, square_path_edges(&order));
    label_all(&mut reference, &names);
    Ok(GadgetFixture { name: format!("long_edge{pairs}"), scene: Scene::Segments(segs), reference, anchors })
}

/// Three segments xx', yy', zz' whose inner endpoints form a triangle.
pub fn clause_gadget() -> GadgetFixture {
    let names = ["x", "x'", "y", "y'", "z", "z'"];
    let p = pts(&[("-0.5", "-0.3"), ("0", "0"), ("0.4", "1.3"), ("0.4", "0.6"), ("1.3", "-0.3"), ("0.8", "0")]);
    let segs = p.chunks(2).map(|c| seg(c[0].clone(), c[1].clone())).collect();
    let edges = [("x", "x'"), ("y", "y'"), ("z", "z'"), ("x'", "y'"), ("y'", "z'"), ("x'", "z'")];
    GadgetFixture {
        name: "clause".into(),
        scene: Scene::Segments(segs),
        reference: Graph::from_named(&names, &edges),
        anchors: anchors_from(&names),
    }
}

/// A corridor of `k` vertices per side closed off by its two end vertices
/// `u` and `v`. Chains run at pitch 9/10 and width 1/5. The graph is the square
/// of the path u, a1, b1, ..., ak, bk, v.
pub fn corridor(k: usize) -> Result<GadgetFixture> {
    if k == 0 || k % 3 != 0 {
        return Err(Error::BadParameter(format!("corridor length {k} is not a positive multiple of 3")));
    }
    let h = |v: i64| rat(v, 100);
    let a = |i: usize| Point::new(h(90 * i as i64), h(0));
    let b = |i: usize| Point::new(h(90 * i as i64 + 45), h(20));
    // Ring order: u, a1..ak, v, bk..b1.
    let mut ring = vec![Point::new(h(-45), h(10))];
    ring.extend((0..k).map(a));
    ring.push(Point::new(h(90 * k as i64), h(10)));
    ring.extend((0..k).rev().map(b));
    let (u, v) = (0, k + 1);
    let ai = |i: usize| 1 + i;
    let bi = |i: usize| 2 * k + 1 - i;
    let mut seq = vec![u];
    for i in 0..k {
        seq.extend([ai(i), bi(i)]);
    }
    seq.push(v);
    let mut names = vec![String::new(); 2 * k + 2];
    names[u] = "u".into();
    names[v] = "v".into();
    for i in 0..k {
        names[ai(i)] = format!("a{}", i + 1);
        names[bi(i)] = format!("b{}", i + 1);
    }
    let mut reference = Graph::from_edges(2 * k + 2, square_path_edges(&seq));
    label_all(&mut reference, &names);
    let anchors = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let poly = Polygon::new(ring, vec![])?;
    Ok(GadgetFixture { name: format!("corridor{k}"), scene: Scene::Polygon(poly), reference, anchors })
}

const CHAMBER_LABELS: [&str; 12] = ["aE", "bE", "kE", "aN", "bN", "kN", "aW", "bW", "kW", "aS", "bS", "center"];

/// A single chamber exactly as the planar compiler emits it, with all four
/// ports closed. `aD`/`bD` are the mouth vertices of port D and `kD` joins
/// port D to the next port counterclockwise.
pub fn chamber() -> GadgetFixture {
    let input = PlanarInput { vertices: vec![PlanarVertex { id: "v".into(), x: 0, y: 0 }], edges: vec![] };
    let c = compile_layout(&input).expect("a lone chamber compiles");
    let mut reference = c.intended;
    label_all(&mut reference, &CHAMBER_LABELS.map(String::from));
    GadgetFixture { name: "chamber".into(), scene: c.scene, reference, anchors: anchors_from(&CHAMBER_LABELS) }
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn numbered_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::from_edges(n, edges.iter().map(|&(a, b)| (a - 1, b - 1)));
    label_all(&mut g, &numbered(n));
    g
}

const POINT_CROSSING_LABELS: [&str; 13] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m"];

const POINT_CROSSING_EDGES: [(&str, &str); 24] = [
    ("a", "b"),
    ("a", "c"),
    ("a", "d"),
    ("b", "e"),
    ("b", "f"),
    ("c", "d"),
    ("c", "h"),
    ("c", "g"),
    ("c", "f"),
    ("d", "i"),
    ("e", "f"),
    ("e", "j"),
    ("f", "g"),
    ("f", "k"),
    ("g", "h"),
    ("g", "k"),
    ("h", "i"),
    ("h", "l"),
    ("h", "k"),
    ("i", "l"),
    ("j", "k"),
    ("j", "m"),
    ("k", "m"),
    ("l", "m"),
];

/// Point-scene gadgets: `long_edge` (a wire with a branch), `crossing`, `clause`.
pub fn point_gadget(name: &str) -> Result<GadgetFixture> {
    match name {
        "crossing" => {
            let p = pts(&[
                ("0", "1"),
                ("0.25", "1.95"),
                ("0.6", "1"),
                ("0", "0.2"),
                ("1.2", "2.1"),
                ("1.1", "1.7"),
                ("1.4", "1"),
                ("1.1", "0.4"),
                ("0.9", "0"),
                ("2.1", "1.8"),
                ("1.8", "1"),
                ("1.9", "0"),
                ("2.4", "0.85"),
            ]);
            Ok(GadgetFixture {
                name: "point_crossing".into(),
                scene: Scene::Points(p),
                reference: Graph::from_named(&POINT_CROSSING_LABELS, &POINT_CROSSING_EDGES),
                anchors: anchors_from(&POINT_CROSSING_LABELS),
            })
        }
        "long_edge" => {
            // Squares 1, 4, 7, 8 and 11 share a color.
            let p = pts(&[
                ("0", "0.75"),
                ("0.75", "0.95"),
                ("0.75", "0.55"),
                ("1.5", "0.75"),
                ("2.25", "0.95"),
                ("2.15", "0.55"),
                ("2.25", "0"),
                ("3", "0.75"),
                ("1.95", "-0.75"),
                ("2.55", "-0.75"),
                ("2.25", "-1.5"),
            ]);
            let edges = [
                (1, 2),
                (1, 3),
                (2, 3),
                (2, 4),
                (3, 4),
                (4, 5),
                (4, 6),
                (5, 6),
                (5, 7),
                (6, 7),
                (5, 8),
                (6, 8),
                (7, 9),
                (7, 10),
                (9, 10),
                (9, 11),
                (10, 11),
            ];
            let mut anchors: BTreeMap<String, usize> = numbered(11).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
            anchors.insert("in".into(), 0);
            anchors.insert("out".into(), 7);
            anchors.insert("branch".into(), 10);
            Ok(GadgetFixture {
                name: "point_long_edge".into(),
                scene: Scene::Points(p),
                reference: numbered_graph(11, &edges),
                anchors,
            })
        }
        "clause" => {
            // Inputs 1, 18, 17 reach the triangle 8, 9, 10 through 7, 18 and 11.
            let p = pts(&[
                ("0.6", "1.52"),
                ("0.6", "0.76"),
                ("0.8", "1"),
                ("1.2", "0.6"),
                ("1.8", "0.76"),
                ("1.8", "0.44"),
                ("2.4", "0.6"),
                ("3", "0.6"),
                ("3.48", "1"),
                ("4", "0.6"),
                ("4.6", "0.6"),
                ("5.2", "0.76"),
                ("5.2", "0.44"),
                ("5.8", "0.6"),
                ("6.2", "1"),
                ("6.4", "0.76"),
                ("6.4", "1.52"),
                ("3.48", "1.52"),
            ]);
            let edges = [
                (1, 2),
                (1, 3),
                (2, 3),
                (2, 4),
                (3, 4),
                (4, 5),
                (4, 6),
                (5, 6),
                (5, 7),
                (6, 7),
                (7, 8),
                (8, 9),
                (8, 10),
                (9, 10),
                (9, 18),
                (10, 11),
                (11, 12),
                (11, 13),
                (12, 13),
                (12, 14),
                (13, 14),
                (14, 15),
                (14, 16),
                (15, 16),
                (15, 17),
                (16, 17),
            ];
            let mut anchors: BTreeMap<String, usize> = numbered(18).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
            for (role, v) in [("x", 1), ("y", 18), ("z", 17), ("x'", 8), ("y'", 9), ("z'", 10)] {
                anchors.insert(role.into(), v - 1);
            }
            Ok(GadgetFixture {
                name: "point_clause".into(),
                scene: Scene::Points(p),
                reference: numbered_graph(18, &edges),
                anchors,
            })
        }
        other => Err(Error::BadParameter(format!("unknown point gadget {other:?}"))),
    }
}

fn star_anchors(center: usize, leaves: [usize; 6]) -> BTreeMap<String, usize> {
    let mut a = BTreeMap::new();
    a.insert("center".into(), center);
    for (i, l) in leaves.iter().enumerate() {
        a.insert(format!("leaf{}", i + 1), *l);
    }
    a
}

/// Scenes whose UDVG contains an induced K1,6: a point row under an apex, a
/// segment row over a vertical segment, and a comb polygon.
pub fn k16_fixtures() -> Vec<GadgetFixture> {
    let h = |v: i64| rat(v, 100);

    let mut row: Vec<Point> = (0..11).map(|i| Point::new(h(10 * i), h(20))).collect();
    row.push(Point::new(h(50), h(0)));
    let mut edges: Vec<(usize, usize)> = (0..10).map(|i| (i, i + 1)).collect();
    edges.extend((0..11).map(|i| (i, 11)));
    let points = GadgetFixture {
        name: "k16_points".into(),
        scene: Scene::Points(row),
        reference: Graph::from_edges(12, edges),
        anchors: star_anchors(11, [0, 2, 4, 6, 8, 10]),
    };

    let mut segs: Vec<Segment> =
        (0..5).map(|i| seg(Point::new(h(20 * i), h(20)), Point::new(h(20 * i + 10), h(20)))).collect();
    segs.push(seg(Point::new(h(50), h(0)), Point::new(h(50), h(-90))));
    let mut edges: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
    edges.extend((0..10).map(|i| (i, 10)));
    edges.push((10, 11));
    let segments = GadgetFixture {
        name: "k16_segments".into(),
        scene: Scene::Segments(segs),
        reference: Graph::from_edges(12, edges),
        anchors: star_anchors(10, [0, 2, 4, 6, 8, 11]),
    };

    let comb = [500, 460, 425, 395, 375, 375, 395, 425, 460, 500, 545];
    let mut ring = vec![Point::new(h(50), h(0))];
    ring.extend(comb.iter().enumerate().map(|(i, &y)| Point::new(h(10 * i as i64), rat(y, 1000))));
    let mut edges: Vec<(usize, usize)> = (1..11).map(|i| (i, i + 1)).collect();
    edges.extend((1..12).map(|i| (0, i)));
    let polygon = GadgetFixture {
        name: "k16_polygon".into(),
        scene: Scene::Polygon(Polygon::new(ring, vec![]).expect("comb polygon is simple")),
        reference: Graph::from_edges(12, edges),
        anchors: star_anchors(0, [1, 3, 5, 7, 9, 11]),
    };

    vec![points, segments, polygon]
}

/// Every named fixture, as used by `udvg verify gadget`.
pub fn fixture_names() -> Vec<&'static str> {
    vec![
        "crossing",
        "long_edge",
        "clause",
        "corridor",
        "chamber",
        "point_long_edge",
        "point_crossing",
        "point_clause",
        "k16_points",
        "k16_segments",
        "k16_polygon",
    ]
}

/// Builds the fixtures behind a name; parameterized gadgets expand to their
/// tested sizes.
pub fn fixtures_named(name: &str) -> Result<Vec<GadgetFixture>> {
    Ok(match name {
        "crossing" => vec![crossing_gadget_segments()],
        "long_edge" => (1..=6).map(long_edge_segments).collect::<Result<_>>()?,
        "clause" => vec![clause_gadget()],
        "corridor" => [3, 6, 9].into_iter().map(corridor).collect::<Result<_>>()?,
        "chamber" => vec![chamber()],
        "point_long_edge" => vec![point_gadget("long_edge")?],
        "point_crossing" => vec![point_gadget("crossing")?],
        "point_clause" => vec![point_gadget("clause")?],
        "k16_points" | "k16_segments" | "k16_polygon" => {
            k16_fixtures().into_iter().filter(|f| f.name == name).collect()
        }
        other => return Err(Error::BadParameter(format!("unknown gadget {other:?}"))),
    })
}

/// One named property of one fixture and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub fixture: String,
    pub property: String,
    pub passed: bool,
}

/// Runs the realization check and the coloring properties of `f`.
pub fn verify_fixture(f: &GadgetFixture) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut check = |property: &str, passed: bool| {
        out.push(Check { fixture: f.name.clone(), property: property.into(), passed });
    };
    let g = udvg(&f.scene)?;
    check("realizes reference graph", graph_diff(&g, &f.reference)?.is_empty());
    let same = |c: &[u8], a: &str, b: &str| c[f.anchor(a)] == c[f.anchor(b)];
    let name = f.name.as_str();
    if name == "crossing" {
        let canon = enumerate_3colorings(&f.reference, true)?;
        check("two colorings up to permutation", canon.len() == 2);
        check("twelve labeled colorings", enumerate_3colorings(&f.reference, false)?.len() == 12);
        check("transfers a to r and h to o", canon.iter().all(|c| same(c, "a", "r") && same(c, "h", "o")));
    } else if let Some(pairs) = name.strip_prefix("long_edge") {
        let pairs: usize = pairs.parse().map_err(|_| Error::BadParameter(name.into()))?;
        let canon = enumerate_3colorings(&f.reference, true)?;
        check("unique coloring up to permutation", canon.len() == 1);
        let period = canon.iter().all(|c| {
            (0..2).all(|row| {
                (0..(2 * pairs).saturating_sub(3))
                    .all(|i| same(c, &format!("row{row}[{i}]"), &format!("row{row}[{}]", i + 3)))
            })
        });
        check("colors repeat with period three", period);
    } else if name == "clause" || name == "point_clause" {
        let ins = ["x", "y", "z"].map(|s| f.anchor(s));
        let table = (0..8u8).all(|bits| {
            let pre: PartialColoring = ins.iter().enumerate().map(|(i, &v)| (v, bits >> i & 1)).collect();
            solve_3coloring(&f.reference, &pre).is_some() == (bits != 0 && bits != 7)
        });
        check("colorable iff inputs not all equal", table);
    } else if name.starts_with("corridor") {
        let all = enumerate_3colorings(&f.reference, false)?;
        check("ends always differ", !all.is_empty() && all.iter().all(|c| !same(c, "u", "v")));
    } else if name == "chamber" {
        let all = enumerate_3colorings(&f.reference, true)?;
        check("colorable", !all.is_empty());
    } else if name == "point_crossing" {
        let all = enumerate_3colorings(&f.reference, false)?;
        check("transfers a to m and e to i", !all.is_empty() && all.iter().all(|c| same(c, "a", "m") && same(c, "e", "i")));
    } else if name == "point_long_edge" {
        let all = enumerate_3colorings(&f.reference, true)?;
        let carried = all.iter().all(|c| ["4", "7", "8", "11"].iter().all(|s| same(c, "1", s)));
        check("carries one color end to end", !all.is_empty() && carried);
    } else if name.starts_with("k16") {
        let found = find_induced_k16(&g);
        check("contains an induced K1,6", found.as_ref().is_some_and(|c| is_induced_k16(&g, c)));
    }
    Ok(out)
}
