//! 4-regular planar graphs, drawn on an integer grid, to polygons with holes.
//!
//! Every vertex becomes a chamber: a small notch-shaped room whose central
//! vertex sees the two mouth vertices of each of its four ports. Every edge
//! becomes a corridor of width 1/5 following the layout polyline, with wall
//! vertices placed in a zigzag so that the visibility graph along it is the
//! square of a path. A corridor with 2k wall vertices, k a multiple of 3,
//! forces its two central vertices apart and lets any distinct pair through.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::{solve_3coloring, verify_coloring, Coloring, PartialColoring};
use crate::error::{Error, Result};
use crate::gadgets::square_path_edges;
use crate::geometry::{rat, Point, Polygon};
use crate::visibility::{Graph, Scene};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarVertex {
    pub id: String,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarEdge {
    pub u: String,
    pub v: String,
    #[serde(default)]
    pub waypoints: Vec<[i64; 2]>,
    #[serde(default = "default_k")]
    pub k: usize,
}

fn default_k() -> usize {
    3
}

/// A graph with an orthogonal grid drawing: integer vertex positions and
/// axis-parallel edge polylines through integer waypoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarInput {
    pub vertices: Vec<PlanarVertex>,
    pub edges: Vec<PlanarEdge>,
}

impl PlanarInput {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("planar input: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("planar input serializes")
    }

    /// The abstract graph, labelled by vertex id.
    pub fn graph(&self) -> Result<Graph> {
        let index = self.index()?;
        let mut g = Graph::new(self.vertices.len());
        g.labels = self.vertices.iter().map(|v| v.id.clone()).enumerate().collect();
        for e in &self.edges {
            let (u, v) = endpoints(&index, e)?;
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn index(&self) -> Result<HashMap<&str, usize>> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex id {:?}", v.id)));
            }
        }
        Ok(index)
    }
}

fn endpoints(index: &HashMap<&str, usize>, e: &PlanarEdge) -> Result<(usize, usize)> {
    let get = |id: &str| index.get(id).copied().ok_or_else(|| Error::Validation(format!("unknown vertex id {id:?}")));
    Ok((get(&e.u)?, get(&e.v)?))
}

/// Scene index of each input vertex's chamber center, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCertificate {
    pub center_anchor: Vec<usize>,
    pub chain_length: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CompiledPlanar {
    pub scene: Scene,
    pub certificate: PolyCertificate,
    pub intended: Graph,
}

pub fn compile_planar(input: &PlanarInput) -> Result<(Scene, PolyCertificate)> {
    let c = compile_planar_with_intended(input)?;
    Ok((c.scene, c.certificate))
}

pub fn compile_planar_with_intended(input: &PlanarInput) -> Result<CompiledPlanar> {
    let g = input.graph_checked()?;
    for v in 0..g.n {
        if g.degree(v) != 4 {
            return Err(Error::NotFourRegular(format!("vertex {} has degree {}", g.label(v), g.degree(v))));
        }
    }
    compile_layout(input)
}

impl PlanarInput {
    /// The graph, rejecting loops and parallel edges.
    fn graph_checked(&self) -> Result<Graph> {
        let index = self.index()?;
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            let (u, v) = endpoints(&index, e)?;
            if u == v {
                return Err(Error::NotFourRegular(format!("loop at {}", e.u)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotFourRegular(format!("parallel edges between {} and {}", e.u, e.v)));
            }
        }
        self.graph()
    }
}

/// Compiles a layout without the degree check. Ports no corridor uses are
/// closed off, so chambers of any degree up to four are allowed.
pub fn compile_layout(input: &PlanarInput) -> Result<CompiledPlanar> {
    let g = input.graph_checked()?;
    if g.n == 0 {
        return Err(Error::Validation("layout has no vertices".into()));
    }
    let layout = Layout::new(input)?;
    if !connected(&g) {
        return Err(Error::Validation("layout graph must be connected".into()));
    }
    let corridors = layout.paths.iter().zip(&input.edges).map(|(p, e)| Corridor::build(p, e)).collect::<Result<Vec<_>>>()?;
    assemble(&layout, &corridors)
}

fn connected(g: &Graph) -> bool {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Scene coloring back to the input graph through the chamber centers. The
/// scene coloring is checked against the compiled scene's graph first.
pub fn decode_graph_coloring(input: &PlanarInput, cert: &PolyCertificate, coloring: &[u8]) -> Result<Coloring> {
    let compiled = compile_layout(input)?;
    if compiled.certificate != *cert {
        return Err(Error::CorruptWitness("certificate does not match the input".into()));
    }
    if coloring.len() != compiled.intended.n {
        return Err(Error::CorruptWitness(format!(
            "coloring has {} entries for {} scene vertices",
            coloring.len(),
            compiled.intended.n
        )));
    }
    if !verify_coloring(&compiled.intended, coloring).unwrap_or(false) {
        return Err(Error::CorruptWitness("coloring is not proper on the scene".into()));
    }
    let out: Coloring = cert.center_anchor.iter().map(|&c| coloring[c]).collect();
    let g = input.graph()?;
    if !verify_coloring(&g, &out)? {
        return Err(Error::CorruptWitness("decoded coloring is not proper on the input".into()));
    }
    Ok(out)
}

pub fn graph_3col_oracle(g: &Graph) -> Option<Coloring> {
    solve_3coloring(g, &PartialColoring::new())
}

/// Layouts shipped with the crate, by name.
pub fn bundled_layout(name: &str) -> Result<PlanarInput> {
    match name {
        "octahedron" => PlanarInput::parse(include_str!("../fixtures/octahedron.json")),
        "square_antiprism" => PlanarInput::parse(include_str!("../fixtures/square_antiprism.json")),
        _ => Err(Error::BadParameter(format!("no bundled layout named {name:?}"))),
    }
}

pub const BUNDLED_LAYOUTS: [&str; 2] = ["octahedron", "square_antiprism"];

// Geometry, in hundredths of a unit.
const GRID: i64 = 1000;
const HALF_WIDTH: i64 = 10;
const MOUTH_A: i64 = 72;
const MOUTH_B: i64 = 97;
const KNEE: Xy = (105, 95);
const CORNER_INNER: i64 = 70;
const CORNER_OUTER_IN: Xy = (-25, -10);
const CORNER_APEX: Xy = (-10, 10);
const CORNER_OUTER_OUT: Xy = (10, 25);
const GAP_MIN: i64 = 38;
const GAP_MAX: i64 = 48;

type Xy = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Dir {
    E,
    N,
    W,
    S,
}

const DIRS: [Dir; 4] = [Dir::E, Dir::N, Dir::W, Dir::S];

impl Dir {
    fn unit(self) -> Xy {
        match self {
            Dir::E => (1, 0),
            Dir::N => (0, 1),
            Dir::W => (-1, 0),
            Dir::S => (0, -1),
        }
    }

    fn ccw(self) -> Dir {
        DIRS[(self as usize + 1) % 4]
    }

    fn toward(a: Xy, b: Xy) -> Dir {
        match ((b.0 - a.0).signum(), (b.1 - a.1).signum()) {
            (1, 0) => Dir::E,
            (0, 1) => Dir::N,
            (-1, 0) => Dir::W,
            _ => Dir::S,
        }
    }

    /// Maps a point given in the frame facing this direction.
    fn frame(self, p: Xy) -> Xy {
        let (dx, dy) = self.unit();
        (p.0 * dx - p.1 * dy, p.0 * dy + p.1 * dx)
    }
}

fn add(a: Xy, b: Xy) -> Xy {
    (a.0 + b.0, a.1 + b.1)
}

fn scale(a: Xy, s: i64) -> Xy {
    (a.0 * s, a.1 * s)
}

/// Validated layout: normalized polylines and the port each one uses.
struct Layout {
    centers: Vec<Xy>,
    paths: Vec<Vec<Xy>>,
    ends: Vec<(usize, usize)>,
    ports: Vec<BTreeMap<Dir, (usize, bool)>>,
}

impl Layout {
    fn new(input: &PlanarInput) -> Result<Layout> {
        let index = input.index()?;
        let centers: Vec<Xy> = input.vertices.iter().map(|v| scale((v.x, v.y), GRID)).collect();
        let mut ports = vec![BTreeMap::new(); centers.len()];
        let mut paths = Vec::new();
        let mut ends = Vec::new();
        for (i, e) in input.edges.iter().enumerate() {
            let (u, v) = endpoints(&index, e)?;
            let path = normalize_path(&input.vertices[u], &e.waypoints, &input.vertices[v], e)?;
            let du = Dir::toward(path[0], path[1]);
            let dv = Dir::toward(path[path.len() - 1], path[path.len() - 2]);
            for (w, d, at_u) in [(u, du, true), (v, dv, false)] {
                if ports[w].insert(d, (i, at_u)).is_some() {
                    return Err(Error::CrossingLayout(format!(
                        "two corridors leave {} on the same side",
                        input.vertices[w].id
                    )));
                }
            }
            paths.push(path);
            ends.push((u, v));
        }
        let layout = Layout { centers, paths, ends, ports };
        layout.check_crossings(input)?;
        Ok(layout)
    }

    fn check_crossings(&self, input: &PlanarInput) -> Result<()> {
        let segs: Vec<(usize, usize, Xy, Xy)> = self
            .paths
            .iter()
            .enumerate()
            .flat_map(|(e, p)| p.windows(2).enumerate().map(move |(j, w)| (e, j, w[0], w[1])))
            .collect();
        let name = |e: usize| format!("{}-{}", input.edges[e].u, input.edges[e].v);
        for (i, &(e, j, a, b)) in segs.iter().enumerate() {
            for &(f, l, c, d) in &segs[i + 1..] {
                let Some(meet) = axis_meet(a, b, c, d) else { continue };
                let ok = if e == f {
                    l == j + 1 && meet == (b, b)
                } else {
                    meet.0 == meet.1 && self.ends_at(e, meet.0) && self.ends_at(f, meet.0)
                };
                if !ok {
                    return Err(Error::CrossingLayout(format!("corridors {} and {} meet", name(e), name(f))));
                }
            }
            for (w, &p) in self.centers.iter().enumerate() {
                if axis_meet(a, b, p, p).is_some() && !self.ends_at(e, p) {
                    return Err(Error::CrossingLayout(format!(
                        "corridor {} passes through {}",
                        name(e),
                        input.vertices[w].id
                    )));
                }
            }
        }
        for (i, &p) in self.centers.iter().enumerate() {
            if let Some(j) = self.centers[..i].iter().position(|&q| q == p) {
                return Err(Error::CrossingLayout(format!(
                    "{} and {} share a position",
                    input.vertices[j].id, input.vertices[i].id
                )));
            }
        }
        Ok(())
    }

    fn ends_at(&self, e: usize, p: Xy) -> bool {
        let path = &self.paths[e];
        path[0] == p || path[path.len() - 1] == p
    }
}

fn normalize_path(from: &PlanarVertex, waypoints: &[[i64; 2]], to: &PlanarVertex, e: &PlanarEdge) -> Result<Vec<Xy>> {
    let mut raw = vec![(from.x, from.y)];
    raw.extend(waypoints.iter().map(|w| (w[0], w[1])));
    raw.push((to.x, to.y));
    let mut path: Vec<Xy> = vec![raw[0]];
    for w in raw.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b || (a.0 != b.0 && a.1 != b.1) {
            return Err(Error::Validation(format!(
                "corridor {}-{}: step {a:?} to {b:?} is not a nonzero axis-parallel move",
                e.u, e.v
            )));
        }
        if path.len() >= 2 {
            let prev = Dir::toward(path[path.len() - 2], a);
            let next = Dir::toward(a, b);
            if prev == next {
                path.pop();
            } else if prev.ccw().ccw() == next {
                return Err(Error::CrossingLayout(format!("corridor {}-{} doubles back at {a:?}", e.u, e.v)));
            }
        }
        path.push(b);
    }
    Ok(path.into_iter().map(|p| scale(p, GRID)).collect())
}

/// Common part of two axis-parallel segments, as its two extreme points.
fn axis_meet(a: Xy, b: Xy, c: Xy, d: Xy) -> Option<(Xy, Xy)> {
    let lo = ((a.0.min(b.0)).max(c.0.min(d.0)), (a.1.min(b.1)).max(c.1.min(d.1)));
    let hi = ((a.0.max(b.0)).min(c.0.max(d.0)), (a.1.max(b.1)).min(c.1.max(d.1)));
    (lo.0 <= hi.0 && lo.1 <= hi.1).then_some((lo, hi))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Right,
    Left,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }

    fn offset(self) -> i64 {
        match self {
            Side::Right => -HALF_WIDTH,
            Side::Left => HALF_WIDTH,
        }
    }
}

/// Wall vertices of one corridor in zigzag order, first on the right wall.
struct Corridor {
    k: usize,
    zigzag: Vec<(Xy, Side)>,
}

struct Leg {
    start: Xy,
    dir: Dir,
    first: (i64, Side),
    last: (i64, Side),
    fewest: usize,
    most: usize,
}

impl Corridor {
    fn build(path: &[Xy], e: &PlanarEdge) -> Result<Corridor> {
        let n = path.len() - 1;
        let turn_side = |i: usize| {
            let (d0, d1) = (Dir::toward(path[i - 1], path[i]), Dir::toward(path[i], path[i + 1]));
            if d0.ccw() == d1 {
                Side::Left
            } else {
                Side::Right
            }
        };
        let mut legs = Vec::new();
        for i in 0..n {
            let (a, b) = (path[i], path[i + 1]);
            let len = (b.0 - a.0).abs() + (b.1 - a.1).abs();
            let first = if i == 0 { (MOUTH_B, Side::Left) } else { (CORNER_INNER, turn_side(i)) };
            let last = if i == n - 1 { (len - MOUTH_B, Side::Right) } else { (len - CORNER_INNER, turn_side(i + 1)) };
            let span = last.0 - first.0;
            // Gaps between consecutive zigzag vertices stay within [GAP_MIN, GAP_MAX].
            let mut fewest = ((span + GAP_MAX - 1) / GAP_MAX - 1).max(0);
            let mut most = span / GAP_MIN - 1;
            let parity = i64::from(first.1 == last.1);
            if fewest % 2 != parity {
                fewest += 1;
            }
            if most % 2 != parity {
                most -= 1;
            }
            if fewest > most {
                return Err(Error::BadChainLength(format!("corridor {}-{} has a leg too short to fill", e.u, e.v)));
            }
            legs.push(Leg { start: a, dir: Dir::toward(a, b), first, last, fewest: fewest as usize, most: most as usize });
        }
        let fixed = 4 + 5 * (n - 1);
        let low = fixed + legs.iter().map(|l| l.fewest).sum::<usize>();
        let high = fixed + legs.iter().map(|l| l.most).sum::<usize>();
        if e.k == 0 {
            return Err(Error::BadChainLength(format!("corridor {}-{} requests k = 0", e.u, e.v)));
        }
        let mut k = e.k.max(low / 2);
        k += (3 - k % 3) % 3;
        if 2 * k > high {
            return Err(Error::BadChainLength(format!(
                "corridor {}-{} fits at most {} wall pairs, {} requested",
                e.u,
                e.v,
                high / 2,
                k
            )));
        }
        let mut extra = 2 * k - low;
        let counts: Vec<usize> = legs
            .iter()
            .map(|l| {
                let take = extra.min(l.most - l.fewest);
                extra -= take;
                l.fewest + take
            })
            .collect();
        let mut zigzag = Vec::with_capacity(2 * k);
        for (i, (leg, &m)) in legs.iter().zip(&counts).enumerate() {
            let at = |t: i64, s: Side| add(leg.start, leg.dir.frame((t, s.offset())));
            if i == 0 {
                zigzag.push((at(MOUTH_A, Side::Right), Side::Right));
                zigzag.push((at(MOUTH_B, Side::Left), Side::Left));
            }
            let span = leg.last.0 - leg.first.0;
            let (gap, rem) = (span / (m as i64 + 1), span % (m as i64 + 1));
            let (mut t, mut side) = leg.first;
            for j in 0..m as i64 {
                t += gap + i64::from(j < rem);
                side = side.other();
                zigzag.push((at(t, side), side));
            }
            if i == n - 1 {
                zigzag.push((at(leg.last.0, Side::Right), Side::Right));
                zigzag.push((at(leg.last.0 + MOUTH_B - MOUTH_A, Side::Left), Side::Left));
            } else {
                let inner = leg.last.1;
                let outer = inner.other();
                let corner = path[i + 1];
                let flip = |p: Xy| if inner == Side::Left { p } else { (p.0, -p.1) };
                let local = |p: Xy| add(corner, leg.dir.frame(flip(p)));
                zigzag.push((at(leg.last.0, inner), inner));
                zigzag.push((local(CORNER_OUTER_IN), outer));
                zigzag.push((local(CORNER_APEX), inner));
                zigzag.push((local(CORNER_OUTER_OUT), outer));
                let next = &legs[i + 1];
                zigzag.push((add(next.start, next.dir.frame((CORNER_INNER, inner.offset()))), inner));
            }
        }
        debug_assert_eq!(zigzag.len(), 2 * k);
        Ok(Corridor { k, zigzag })
    }

    fn wall(&self, side: Side) -> Vec<Xy> {
        self.zigzag.iter().filter(|z| z.1 == side).map(|z| z.0).collect()
    }
}

struct Chamber {
    center: Xy,
}

impl Chamber {
    fn mouth_a(&self, d: Dir) -> Xy {
        add(self.center, d.frame((MOUTH_A, -HALF_WIDTH)))
    }

    fn mouth_b(&self, d: Dir) -> Xy {
        add(self.center, d.frame((MOUTH_B, HALF_WIDTH)))
    }

    /// Boundary vertex between port `d` and the next port counterclockwise.
    fn joint(&self, d: Dir) -> Xy {
        if d == Dir::S {
            self.center
        } else {
            add(self.center, d.frame(KNEE))
        }
    }
}

fn assemble(layout: &Layout, corridors: &[Corridor]) -> Result<CompiledPlanar> {
    let chambers: Vec<Chamber> = layout.centers.iter().map(|&c| Chamber { center: c }).collect();
    let walls: Vec<(Vec<Xy>, Vec<Xy>)> = corridors.iter().map(|c| (c.wall(Side::Right), c.wall(Side::Left))).collect();
    let port_of = |e: usize, at_u: bool| -> (usize, Dir) {
        let w = if at_u { layout.ends[e].0 } else { layout.ends[e].1 };
        let d = layout.ports[w].iter().find(|(_, &(f, u))| f == e && u == at_u).map(|(d, _)| *d).unwrap();
        (w, d)
    };
    // Walk the boundary with the interior on the left.
    let mut visited = BTreeSet::new();
    let mut rings: Vec<Vec<Xy>> = Vec::new();
    for w in 0..chambers.len() {
        for d in DIRS {
            if visited.contains(&(w, d)) {
                continue;
            }
            let mut ring = Vec::new();
            let (mut cw, mut cd) = (w, d);
            while visited.insert((cw, cd)) {
                let (ow, od) = match layout.ports[cw].get(&cd) {
                    Some(&(e, true)) => {
                        ring.extend(&walls[e].0);
                        port_of(e, false)
                    }
                    Some(&(e, false)) => {
                        ring.extend(walls[e].1.iter().rev());
                        port_of(e, true)
                    }
                    None => {
                        ring.push(chambers[cw].mouth_a(cd));
                        ring.push(chambers[cw].mouth_b(cd));
                        (cw, cd)
                    }
                };
                ring.push(chambers[ow].joint(od));
                cw = ow;
                cd = od.ccw();
            }
            rings.push(ring);
        }
    }
    let area = |r: &[Xy]| -> i128 {
        (0..r.len())
            .map(|i| {
                let (a, b) = (r[i], r[(i + 1) % r.len()]);
                a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128
            })
            .sum()
    };
    let (outer, holes): (Vec<Vec<Xy>>, Vec<Vec<Xy>>) = rings.into_iter().partition(|r| area(r) > 0);
    if outer.len() != 1 {
        return Err(Error::CrossingLayout(format!("layout bounds {} outer faces", outer.len())));
    }
    let flat: Vec<Xy> = outer.iter().chain(&holes).flatten().copied().collect();
    let index: HashMap<Xy, usize> = flat.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    if index.len() != flat.len() {
        return Err(Error::CrossingLayout("corridor walls overlap".into()));
    }
    let id = |p: Xy| index[&p];
    let mut intended = Graph::new(flat.len());
    for (w, ch) in chambers.iter().enumerate() {
        let c = id(ch.center);
        for d in DIRS {
            intended.add_edge(c, id(ch.mouth_a(d)));
            intended.add_edge(c, id(ch.mouth_b(d)));
            if d != Dir::S {
                intended.add_edge(id(ch.joint(d)), id(ch.mouth_b(d)));
                intended.add_edge(id(ch.joint(d)), id(ch.mouth_a(d.ccw())));
            }
            if !layout.ports[w].contains_key(&d) {
                intended.add_edge(id(ch.mouth_a(d)), id(ch.mouth_b(d)));
            }
        }
    }
    for (e, cor) in corridors.iter().enumerate() {
        let (u, v) = layout.ends[e];
        let mut seq = vec![id(chambers[u].center)];
        seq.extend(cor.zigzag.iter().map(|z| id(z.0)));
        seq.push(id(chambers[v].center));
        for (a, b) in square_path_edges(&seq) {
            intended.add_edge(a, b);
        }
    }
    let point = |p: &Xy| Point::new(rat(p.0, 100), rat(p.1, 100));
    let to_ring = |r: &Vec<Xy>| r.iter().map(point).collect::<Vec<_>>();
    let polygon = Polygon::new(to_ring(&outer[0]), holes.iter().map(to_ring).collect())?;
    let certificate = PolyCertificate {
        center_anchor: chambers.iter().map(|c| id(c.center)).collect(),
        chain_length: corridors.iter().map(|c| c.k).collect(),
    };
    Ok(CompiledPlanar { scene: Scene::Polygon(polygon), certificate, intended })
}
