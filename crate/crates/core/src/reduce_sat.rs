//! Monotone NAE3SAT to segment scenes.
//!
//! Every variable owns a horizontal wire on its own row; each literal of each
//! clause owns a column. A column's vertical drop leaves its variable's wire
//! at a tap, passes the wires of later variables through crossing gadgets,
//! and ends in the clause row, where three drops meet in a triangle. Wires are
//! squares of paths, so colors repeat with period three along them; the
//! compiler keeps every interface aligned so the literal phase arrives intact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{CROSSING_COORDS, CROSSING_LABELS, CROSSING_SEGMENT_EDGES, CROSSING_SIGHT_EDGES};
use crate::geometry::{parse_rational, rat, Point, Segment};
use crate::visibility::{Graph, Scene};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<[usize; 3]>,
}

pub type Assignment = Vec<bool>;

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(v) = c.iter().find(|&&v| v >= num_vars) {
                return Err(Error::Validation(format!("clause {i} uses variable {v} but there are {num_vars}")));
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    /// Reads `p nae3sat <n> <m>` followed by `m` lines of three 1-based
    /// variable indices. Lines starting with `c` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "p" || h[1] != "nae3sat" {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        let (n, m) = (num(h[2])?, num(h[3])?);
        let mut clauses = Vec::with_capacity(m);
        for line in lines {
            let vs: Vec<usize> = line.split_whitespace().map(num).collect::<Result<_>>()?;
            if vs.len() != 3 || vs.contains(&0) {
                return Err(Error::Parse(format!("bad clause {line:?}")));
            }
            clauses.push([vs[0] - 1, vs[1] - 1, vs[2] - 1]);
        }
        if clauses.len() != m {
            return Err(Error::Parse(format!("header promises {m} clauses, found {}", clauses.len())));
        }
        Formula::new(n, clauses)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p nae3sat {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s += &format!("{} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1);
        }
        s
    }

    pub fn satisfied_by(&self, a: &[bool]) -> bool {
        a.len() == self.num_vars
            && self.clauses.iter().all(|c| {
                let t = c.iter().filter(|&&v| a[v]).count();
                t > 0 && t < 3
            })
    }
}

pub const ORACLE_MAX_VARS: usize = 24;

/// Brute force over all assignments in counting order.
pub fn nae3sat_oracle(f: &Formula) -> Result<Option<Assignment>> {
    if f.num_vars > ORACLE_MAX_VARS {
        return Err(Error::TooLargeToEnumerate(f.num_vars, ORACLE_MAX_VARS));
    }
    for bits in 0u32..(1u32 << f.num_vars) {
        let a: Assignment = (0..f.num_vars).map(|i| bits >> i & 1 == 1).collect();
        if f.satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub row: usize,
    pub column: usize,
    pub a: usize,
    pub r: usize,
    pub h: usize,
    pub o: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub variable_anchor: Vec<usize>,
    pub clause_anchor: Vec<[usize; 3]>,
    pub neutral_anchor: usize,
    pub crossing_registry: Vec<CrossingRecord>,
}

/// A compiled scene with the graph its construction is meant to realize.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub scene: Scene,
    pub certificate: ReductionCertificate,
    pub intended: Graph,
}

pub fn compile_nae3sat(f: &Formula) -> (Scene, ReductionCertificate) {
    let c = compile_with_intended(f);
    (c.scene, c.certificate)
}

/// `variable q` is true iff its anchor has the smaller of the two colors that
/// differ from the neutral anchor's color.
pub fn decode_assignment(f: &Formula, cert: &ReductionCertificate, coloring: &[u8]) -> Result<Assignment> {
    let get = |v: usize| {
        coloring
            .get(v)
            .copied()
            .ok_or_else(|| Error::CorruptWitness(format!("coloring has no entry for vertex {v}")))
    };
    let neutral = get(cert.neutral_anchor)?;
    let truth = (0..3u8).find(|&c| c != neutral).unwrap();
    (0..f.num_vars)
        .map(|q| {
            let c = get(cert.variable_anchor[q])?;
            if c == neutral {
                return Err(Error::CorruptWitness(format!("variable {q} carries the neutral color")));
            }
            Ok(c == truth)
        })
        .collect()
}

// Layout constants, in hundredths of a unit.
const CELL_W: i64 = 1140;
const CELL_H: i64 = 1710;
const COL_X: i64 = 390;
const COL_TOP: i64 = 425;
const SPINE_X: i64 = -1300;
const SPINE_Y: i64 = -80;
const PAIR: i64 = 190;
const SEG: i64 = 90;
const STAGGER: i64 = 20;
const TAP_PAIR: usize = 2;

type Xy = (i64, i64);

#[derive(Default)]
struct Builder {
    coords: Vec<Xy>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn seg(&mut self, a: Xy, b: Xy) -> (usize, usize) {
        let i = self.coords.len();
        self.coords.push(a);
        self.coords.push(b);
        self.edges.push((i, i + 1));
        (i, i + 1)
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Square of the path through `seq`.
    fn strip(&mut self, seq: &[usize]) {
        for (i, &u) in seq.iter().enumerate() {
            for &v in seq.iter().skip(i + 1).take(2) {
                self.edge(u, v);
            }
        }
    }

    fn pt(&self, v: usize) -> Xy {
        self.coords[v]
    }

    /// Two staggered segments heading along `dir` (+1 right, -1 left), the
    /// second offset by `(dir, dir)` stagger. Order: start, offset start,
    /// end, offset end.
    fn hpair(&mut self, (x, y): Xy, len: i64, dir: i64) -> [usize; 4] {
        let s = STAGGER * dir;
        let (a, c) = self.seg((x, y), (x + dir * len, y));
        let (b, d) = self.seg((x + s, y + s), (x + dir * len + s, y + s));
        [a, b, c, d]
    }

    /// Two staggered segments heading down, the second at `(+s, -s)`.
    fn vpair(&mut self, (x, y): Xy, len: i64) -> [usize; 4] {
        let (a, c) = self.seg((x, y), (x, y - len));
        let (b, d) = self.seg((x + STAGGER, y - STAGGER), (x + STAGGER, y - len - STAGGER));
        [a, b, c, d]
    }

    /// Pairs along a horizontal wire: each entry is (segment length, gap, dy after).
    fn hwire(&mut self, mut at: Xy, spec: &[(i64, i64, i64)], dir: i64) -> (Vec<usize>, Xy) {
        let mut out = Vec::new();
        for &(len, gap, dy) in spec {
            out.extend(self.hpair(at, len, dir));
            at = (at.0 + dir * (len + gap), at.1 + dy);
        }
        (out, at)
    }

    /// Pairs along a vertical wire: each entry is (segment length, gap, dx after).
    fn vwire(&mut self, mut at: Xy, spec: &[(i64, i64, i64)]) -> (Vec<usize>, Xy) {
        let mut out = Vec::new();
        for &(len, gap, dx) in spec {
            out.extend(self.vpair(at, len));
            at = (at.0 + dx, at.1 - len - gap);
        }
        (out, at)
    }

    fn std_h(&mut self, (x, y): Xy, pairs: usize) -> Vec<usize> {
        let spec = vec![(SEG, PAIR - SEG, 0); pairs];
        self.hwire((x, y), &spec, 1).0
    }
}

fn at(x: i64, y: i64) -> Xy {
    (x, y)
}

/// The H wire of a plain cell: six standard pairs.
fn plain(b: &mut Builder, o: Xy) -> Vec<usize> {
    b.std_h(o, 6)
}

struct TapOut {
    h: Vec<usize>,
    drop: Vec<usize>,
}

/// Plain H wire plus a drop that starts from a pendant under pair `TAP_PAIR`
/// and shifts left onto the column line while descending to the next row.
fn tap(b: &mut Builder, o: Xy) -> TapOut {
    let h = plain(b, o);
    let (s2, s3) = (h[4 * TAP_PAIR + 2], h[4 * TAP_PAIR + 3]);
    let p = b.pt(s2);
    let z0 = at(p.0 + 10, p.1 - 70);
    let (z, e) = b.seg(z0, at(z0.0 + 30, z0.1 - 40));
    b.edge(z, s2);
    b.edge(z, s3);
    let mut spec = vec![(80, 80, -10); 7];
    spec[6].0 = 85;
    let (v, end) = b.vwire(at(z0.0 - 20, z0.1 - 90), &spec);
    debug_assert_eq!(end, at(o.0 + COL_X, o.1 + COL_TOP - CELL_H));
    let mut drop = vec![z, e];
    drop.extend(v);
    TapOut { h, drop }
}

struct CrossOut {
    h_in: Vec<usize>,
    h_out: Vec<usize>,
    v_in: Vec<usize>,
    v_out: Vec<usize>,
    ports: [usize; 4],
}

fn hundredths(s: &str) -> i64 {
    let r = parse_rational(s).expect("gadget coordinate") * rat(100, 1);
    assert!(r.is_integer(), "gadget coordinate {s} is not a multiple of 1/100");
    i64::try_from(r.to_integer()).expect("gadget coordinate fits")
}

/// Crossing cell. The gadget's horizontal port pair (a, r) and vertical pair
/// (h, o) are attached with mirror-image connectors, so the offsets the
/// gadget introduces cancel and both wires leave on their original lines.
fn crossing(b: &mut Builder, o: Xy) -> CrossOut {
    let mut h_in = b.std_h(o, 1);
    let (p, q) = b.seg(at(o.0 + 170, o.1 + 10), at(o.0 + 170, o.1 + 70));
    let g = at(o.0 + 230, o.1 - 165);
    let mut id = BTreeMap::new();
    for (k, pair) in CROSSING_COORDS.chunks(2).enumerate() {
        let pa = at(g.0 + hundredths(pair[0].0), g.1 + hundredths(pair[0].1));
        let pb = at(g.0 + hundredths(pair[1].0), g.1 + hundredths(pair[1].1));
        let (u, v) = b.seg(pa, pb);
        id.insert(CROSSING_LABELS[2 * k], u);
        id.insert(CROSSING_LABELS[2 * k + 1], v);
    }
    for (x, y) in CROSSING_SIGHT_EDGES {
        b.edge(id[x], id[y]);
    }
    debug_assert_eq!(CROSSING_SEGMENT_EDGES.len(), 9);
    let (ga, gr, gh, go) = (id["a"], id["r"], id["h"], id["o"]);
    h_in.extend([p, q, ga]);

    let r = b.pt(gr);
    let (pe, qe) = b.seg(at(r.0 + 60, r.1 + 35), at(r.0 + 60, r.1 - 25));
    let (exit, end) = b.hwire(at(o.0 + 660, o.1), &[(80, 80, 0); 3], 1);
    debug_assert_eq!(end, at(o.0 + CELL_W, o.1));
    let mut h_out = vec![gr, qe, pe];
    h_out.extend(exit);

    let top = at(o.0 + COL_X, o.1 + COL_TOP);
    let mut v_in = b.vwire(top, &[(SEG, 0, 0)]).0;
    let ye = top.1 - SEG;
    let (vp, vq) = b.seg(at(top.0 + 20, ye - 80), at(top.0 - 40, ye - 100));
    debug_assert_eq!(b.pt(gh), at(top.0 - 20, ye - 160));
    v_in.extend([vp, vq, gh]);

    let bo = b.pt(go);
    let (vpe, vqe) = b.seg(at(bo.0 - 40, bo.1 - 80), at(bo.0 + 20, bo.1 - 60));
    let mut spec = vec![(80, 80, 0); 6];
    spec[5] = (SEG, SEG, 0);
    let (exit, end) = b.vwire(at(top.0, top.1 - 730), &spec);
    debug_assert_eq!(end, at(top.0, top.1 - CELL_H));
    let mut v_out = vec![go, vqe, vpe];
    v_out.extend(exit);
    CrossOut { h_in, h_out, v_in, v_out, ports: [ga, gr, gh, go] }
}

/// Spine pair `j` in upward order; row `i` attaches at `j = -9 i`.
fn spine_pair(b: &mut Builder, j: i64) -> [usize; 4] {
    let p = at(SPINE_X, SPINE_Y + PAIR * j);
    let (a, c) = b.seg(p, at(p.0, p.1 + SEG));
    let (s, d) = b.seg(at(p.0 - STAGGER, p.1 + STAGGER), at(p.0 - STAGGER, p.1 + SEG + STAGGER));
    [a, s, c, d]
}

/// Start of row `i`: a pendant on the spine and six pairs up to column 0.
fn row_start(b: &mut Builder, y: i64, spine: &[usize; 4]) -> Vec<usize> {
    let z0 = at(SPINE_X + 70, SPINE_Y + y + 100);
    let (z, e) = b.seg(z0, at(z0.0 + 40, z0.1 + 30));
    b.edge(z, spine[2]);
    b.edge(z, spine[3]);
    let mut h = vec![z, e];
    let first = at(-CELL_W, y);
    debug_assert_eq!(first, at(z0.0 + 90, z0.1 - 20));
    h.extend(b.std_h(first, 6));
    h
}

struct ClauseOut {
    left: Vec<usize>,
    mid: Vec<usize>,
    right: Vec<usize>,
    inner: [usize; 3],
}

/// Clause row section under columns `3k..3k+3`. The outer drops turn toward
/// the middle one without branching, so every strip stays a single square of
/// a path, and the three ends meet at a triangle. Strip lengths are chosen so
/// each end lands on the literal phase.
fn clause(b: &mut Builder, o: Xy) -> ClauseOut {
    let top = o.1 + COL_TOP;
    let (mut mid, end) = b.vwire(at(o.0 + CELL_W + COL_X, top), &[(SEG, 100, 0); 6]);
    let (y, y2) = b.seg(end, at(end.0, end.1 - 90));
    mid.push(y);
    let q = at(end.0, end.1 - 120);

    let (mut left, _) = b.vwire(at(o.0 + COL_X, top), &[(80, 80, 0); 8]);
    let e = b.pt(left[left.len() - 2]);
    let (c1, c2) = b.seg(at(e.0 + 45, e.1 - 70), at(e.0 + 100, e.1 - 35));
    let spec = [(80, 96, 20), (80, 96, 10), (80, 96, 0), (80, 96, 0), (80, 96, 0)];
    let (wire, end) = b.hwire(at(e.0 + 130, e.1 - 90), &spec, 1);
    debug_assert_eq!(end, at(q.0 - 130, q.1));
    let (x, x2) = b.seg(end, at(q.0 - 40, q.1));
    left.extend([c1, c2]);
    left.extend(wire);
    left.push(x);

    let (mut right, _) = b.vwire(at(o.0 + 2 * CELL_W + COL_X, top), &[(80, 80, 0); 7]);
    let e = b.pt(right[right.len() - 2]);
    let (c1, c2) = b.seg(at(e.0 + 30, e.1 - 80), at(e.0 + 5, e.1 - 115));
    let (wire, end) = b.hwire(at(e.0 - 55, e.1 - 100), &[(80, 80, -20); 6], -1);
    debug_assert_eq!(end, at(q.0 + 125, q.1));
    let (z, z2) = b.seg(end, at(q.0 + 40, q.1));
    right.extend([c1, c2]);
    right.extend(wire);
    right.push(z);

    b.edge(x2, y2);
    b.edge(y2, z2);
    b.edge(x2, z2);
    ClauseOut { left, mid, right, inner: [x2, y2, z2] }
}

fn to_point((x, y): Xy) -> Point {
    Point::new(rat(x, 100), rat(y, 100))
}

pub fn compile_with_intended(f: &Formula) -> Compiled {
    let n = f.num_vars;
    let cols = 3 * f.clauses.len();
    let mut b = Builder::default();

    let bottom = -9 * (n.max(1) as i64 - 1) - 2;
    let spine: Vec<[usize; 4]> = (bottom..=2).map(|j| spine_pair(&mut b, j)).collect();
    let spine_index = |j: i64| (j - bottom) as usize;
    let flat: Vec<usize> = spine.iter().flatten().copied().collect();
    b.strip(&flat);
    let neutral_anchor = spine[spine_index(1)][0];

    // Open vertical strips, one per column.
    let mut drops: Vec<Vec<usize>> = vec![Vec::new(); cols];
    let mut variable_anchor = Vec::with_capacity(n);
    let mut crossing_registry = Vec::new();

    for i in 0..n {
        let y = -(i as i64) * CELL_H;
        let mut wire = row_start(&mut b, y, &spine[spine_index(-9 * i as i64)]);
        let anchor = b.coords.len();
        for (c, drop) in drops.iter_mut().enumerate() {
            let o = at(c as i64 * CELL_W, y);
            let v = f.clauses[c / 3][c % 3];
            if v > i {
                wire.extend(plain(&mut b, o));
            } else if v == i {
                let t = tap(&mut b, o);
                wire.extend(t.h);
                *drop = t.drop;
            } else {
                let x = crossing(&mut b, o);
                wire.extend(x.h_in);
                b.strip(&wire);
                wire = x.h_out;
                drop.extend(x.v_in);
                b.strip(drop);
                *drop = x.v_out;
                let [a, r, h, o] = x.ports;
                crossing_registry.push(CrossingRecord { row: i, column: c, a, r, h, o });
            }
        }
        let last = b.std_h(at(cols as i64 * CELL_W, y), 1);
        variable_anchor.push(anchor);
        wire.extend(last);
        b.strip(&wire);
    }

    let y = -(n as i64) * CELL_H;
    let mut clause_anchor = Vec::with_capacity(f.clauses.len());
    for k in 0..f.clauses.len() {
        let out = clause(&mut b, at(3 * k as i64 * CELL_W, y));
        for (j, part) in [out.left, out.mid, out.right].into_iter().enumerate() {
            let drop = &mut drops[3 * k + j];
            drop.extend(part);
            b.strip(drop);
        }
        clause_anchor.push(out.inner);
    }

    let points: Vec<Point> = b.coords.iter().copied().map(to_point).collect();
    let segments = points
        .chunks(2)
        .map(|c| Segment::new(c[0].clone(), c[1].clone()).expect("compiler emits proper segments"))
        .collect();
    let intended = Graph::from_edges(points.len(), b.edges.iter().copied());
    Compiled {
        scene: Scene::Segments(segments),
        certificate: ReductionCertificate { variable_anchor, clause_anchor, neutral_anchor, crossing_registry },
        intended,
    }
}
