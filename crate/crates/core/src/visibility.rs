//! Visibility graphs of point, segment and polygon scenes, with or without the
//! unit distance filter.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, Location, Point, Polygon, Rational, Segment, ThresholdPolicy};
use crate::kernel::{self, Coord, Grid, Hit, IPt, Xy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scene {
    Points(Vec<Point>),
    Segments(Vec<Segment>),
    Polygon(Polygon),
}

impl Scene {
    /// Flattened vertex list: segment `i` gives vertices `2i`, `2i+1`;
    /// polygons list the outer ring and then each hole.
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Scene::Points(p) => p.clone(),
            Scene::Segments(s) => s.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect(),
            Scene::Polygon(p) => p.vertices(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scene::Points(_) => "points",
            Scene::Segments(_) => "segments",
            Scene::Polygon(_) => "polygon",
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Scene::Points(p) => p.is_empty(),
            Scene::Segments(s) => s.is_empty(),
            Scene::Polygon(p) => p.outer.is_empty(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scene::Points(p) => check_distinct(p),
            Scene::Segments(s) => check_disjoint(s),
            Scene::Polygon(p) => p.validate(),
        }
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Scene {
        let t = |p: &Point| p.translate(dx, dy);
        match self {
            Scene::Points(p) => Scene::Points(p.iter().map(t).collect()),
            Scene::Segments(s) => Scene::Segments(s.iter().map(|s| Segment { a: t(&s.a), b: t(&s.b) }).collect()),
            Scene::Polygon(p) => Scene::Polygon(Polygon {
                outer: p.outer.iter().map(t).collect(),
                holes: p.holes.iter().map(|h| h.iter().map(t).collect()).collect(),
            }),
        }
    }
}

/// Distance filter applied on top of plain visibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    Unit(ThresholdPolicy),
    Unbounded,
}

impl Default for Reach {
    fn default() -> Self {
        Reach::Unit(ThresholdPolicy::Closed)
    }
}

impl From<ThresholdPolicy> for Reach {
    fn from(p: ThresholdPolicy) -> Self {
        Reach::Unit(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    pub n: usize,
    edges: BTreeSet<(usize, usize)>,
    pub labels: BTreeMap<usize, String>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, ..Default::default() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph on named vertices; vertex `i` gets `names[i]` as its label.
    pub fn from_named(names: &[&str], edges: &[(&str, &str)]) -> Self {
        let idx = |s: &str| names.iter().position(|n| *n == s).unwrap_or_else(|| panic!("unknown vertex {s}"));
        let mut g = Graph::from_edges(names.len(), edges.iter().map(|(a, b)| (idx(a), idx(b))));
        g.labels = names.iter().enumerate().map(|(i, s)| (i, s.to_string())).collect();
        g
    }

    /// Panics on self-loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range for n={}", self.n);
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn label(&self, v: usize) -> String {
        self.labels.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    /// Vertex index carrying `label`.
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().find(|(_, l)| l.as_str() == label).map(|(&i, _)| i)
    }

    /// Induced subgraph on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(keep.len());
        for &(u, v) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&u), pos.get(&v)) {
                g.add_edge(a, b);
            }
        }
        for (i, &v) in keep.iter().enumerate() {
            if let Some(l) = self.labels.get(&v) {
                g.labels.insert(i, l.clone());
            }
        }
        g
    }
}

/// Edge-set difference between two graphs on the same vertex set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDiff {
    /// Present in the first graph only.
    pub only_left: Vec<(usize, usize)>,
    /// Present in the second graph only.
    pub only_right: Vec<(usize, usize)>,
}

impl GraphDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }

    /// Human-readable pair list using the labels of `g`.
    pub fn describe(&self, g: &Graph) -> String {
        let fmt = |v: &[(usize, usize)]| {
            v.iter().map(|&(a, b)| format!("{}-{}", g.label(a), g.label(b))).collect::<Vec<_>>().join(", ")
        };
        format!("only in left: [{}]; only in right: [{}]", fmt(&self.only_left), fmt(&self.only_right))
    }
}

pub fn graph_diff(g1: &Graph, g2: &Graph) -> Result<GraphDiff> {
    if g1.n != g2.n {
        return Err(Error::ShapeMismatch(g1.n, g2.n));
    }
    Ok(GraphDiff {
        only_left: g1.edges.difference(&g2.edges).copied().collect(),
        only_right: g2.edges.difference(&g1.edges).copied().collect(),
    })
}

pub fn graphs_equal(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(graph_diff(g1, g2)?.is_empty())
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(format!("{p:?}")));
        }
    }
    Ok(())
}

/// Either the scaled-integer frame or the rational coordinates with unit 1.
enum Frame {
    Int(Vec<IPt>, i128),
    Rat(Vec<Point>, Rational),
}

impl Frame {
    fn of(points: &[Point]) -> Frame {
        match kernel::to_integer_frame(points) {
            Some((pts, unit)) => Frame::Int(pts, unit),
            None => Frame::Rat(points.to_vec(), Rational::one()),
        }
    }
}

fn segment_boxes<P: Xy>(pts: &[P]) -> Vec<(P, P)> {
    pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
}

fn first_overlap<P: Xy>(pts: &[P], unit: &P::T) -> Option<(usize, usize)> {
    let boxes = segment_boxes(pts);
    let mut grid = Grid::new(&boxes, unit);
    for (i, (a, b)) in boxes.iter().enumerate() {
        for j in grid.query(a, b, unit) {
            if j <= i {
                continue;
            }
            let (c, d) = &boxes[j];
            if kernel::boxes_meet(a, b, c, d) && kernel::intersect(a, b, c, d) != Hit::Empty {
                return Some((i, j));
            }
        }
    }
    None
}

fn check_disjoint(segments: &[Segment]) -> Result<()> {
    let pts: Vec<Point> = segments.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
    let hit = match Frame::of(&pts) {
        Frame::Int(p, u) => first_overlap(&p, &u),
        Frame::Rat(p, u) => first_overlap(&p, &u),
    };
    match hit {
        Some((i, j)) => Err(Error::OverlappingScene(i, j)),
        None => Ok(()),
    }
}

/// Vertex pairs `(u, v)`, `u < v`, that pass the distance filter.
fn candidate_pairs<P: Xy>(pts: &[P], unit: &P::T, reach: Reach) -> Vec<(usize, usize)> {
    let n = pts.len();
    match reach {
        Reach::Unbounded => (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect(),
        Reach::Unit(policy) => {
            let unit2 = unit.mul(unit);
            let boxes: Vec<(P, P)> = pts.iter().map(|p| (p.clone(), p.clone())).collect();
            let mut grid = Grid::new(&boxes, unit);
            let mut out = Vec::new();
            for u in 0..n {
                for v in grid.near(&pts[u], unit) {
                    if v > u && policy.admits(&kernel::sq_dist(&pts[u], &pts[v]), &unit2) {
                        out.push((u, v));
                    }
                }
            }
            out
        }
    }
}

fn points_graph<P: Xy>(pts: &[P], unit: &P::T, reach: Reach) -> Graph {
    let boxes: Vec<(P, P)> = pts.iter().map(|p| (p.clone(), p.clone())).collect();
    let mut grid = Grid::new(&boxes, unit);
    let mut g = Graph::new(pts.len());
    for (u, v) in candidate_pairs(pts, unit, reach) {
        let (p, q) = (&pts[u], &pts[v]);
        if !grid.query(p, q, unit).into_iter().any(|r| kernel::on_open_segment(p, q, &pts[r])) {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn visibility_points(points: &[Point], reach: impl Into<Reach>) -> Result<Graph> {
    let reach = reach.into();
    check_distinct(points)?;
    Ok(match Frame::of(points) {
        Frame::Int(p, u) => points_graph(&p, &u, reach),
        Frame::Rat(p, u) => points_graph(&p, &u, reach),
    })
}

fn segments_graph<P: Xy>(pts: &[P], unit: &P::T, reach: Reach) -> Graph {
    let boxes = segment_boxes(pts);
    let mut grid = Grid::new(&boxes, unit);
    let mut g = Graph::new(pts.len());
    for (u, v) in candidate_pairs(pts, unit, reach) {
        if u / 2 == v / 2 {
            g.add_edge(u, v);
            continue;
        }
        let (p, q) = (&pts[u], &pts[v]);
        let blocked = grid.query(p, q, unit).into_iter().any(|s| {
            let (a, b) = &boxes[s];
            if !kernel::boxes_meet(p, q, a, b) {
                return false;
            }
            match kernel::intersect(p, q, a, b) {
                Hit::Empty => false,
                Hit::Touch(x) => x != *p && x != *q,
                Hit::Cross | Hit::Overlap => true,
            }
        });
        if !blocked {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn visibility_segments(segments: &[Segment], reach: impl Into<Reach>) -> Result<Graph> {
    let reach = reach.into();
    check_disjoint(segments)?;
    let pts: Vec<Point> = segments.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
    Ok(match Frame::of(&pts) {
        Frame::Int(p, u) => segments_graph(&p, &u, reach),
        Frame::Rat(p, u) => segments_graph(&p, &u, reach),
    })
}

/// Position of `r` along `p→q` as a fraction in `[0, 1]`, assuming `r` lies on the line.
fn param(p: &Point, q: &Point, r: &Point) -> Rational {
    if p.x != q.x {
        (&r.x - &p.x) / (&q.x - &p.x)
    } else {
        (&r.y - &p.y) / (&q.y - &p.y)
    }
}

fn lerp(p: &Point, q: &Point, t: &Rational) -> Point {
    Point::new(&p.x + (&q.x - &p.x) * t, &p.y + (&q.y - &p.y) * t)
}

/// Closed segment `pq` stays inside the closed region of `poly`.
pub fn segment_inside_polygon(p: &Point, q: &Point, poly: &Polygon) -> bool {
    let edges = poly.boundary_segments();
    segment_inside_with(p, q, &edges, 0..edges.len(), |m| point_in_polygon(m, poly) != Location::Exterior)
}

fn segment_inside_with(
    p: &Point,
    q: &Point,
    edges: &[(Point, Point)],
    near: impl IntoIterator<Item = usize>,
    mut covered: impl FnMut(&Point) -> bool,
) -> bool {
    let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for (a, b) in near.into_iter().map(|i| &edges[i]) {
        if !kernel::boxes_meet(p, q, a, b) {
            continue;
        }
        match kernel::intersect(p, q, a, b) {
            Hit::Empty => {}
            Hit::Cross => return false,
            Hit::Touch(x) => cuts.push(param(p, q, &x)),
            Hit::Overlap => {
                for x in [a, b] {
                    let t = param(p, q, x);
                    if t > Rational::zero() && t < Rational::one() {
                        cuts.push(t);
                    }
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let two = Rational::from_integer(2.into());
    cuts.windows(2).all(|w| covered(&lerp(p, q, &((&w[0] + &w[1]) / &two))))
}

/// Point location against a validated polygon using only the boundary edges
/// near the horizontal ray from the query point.
struct Locator<'a> {
    edges: &'a [(Point, Point)],
    grid: Grid,
    right: Rational,
}

impl Locator<'_> {
    fn covers(&mut self, m: &Point) -> bool {
        let one = Rational::one();
        let far = Point::new(self.right.clone(), m.y.clone());
        let mut inside = false;
        for i in self.grid.query(m, &far, &one) {
            let (a, b) = &self.edges[i];
            if kernel::on_segment(a, b, m) {
                return true;
            }
            if (a.y > m.y) != (b.y > m.y) {
                let c = kernel::cross(a, b, m);
                let up = b.y > a.y;
                if (up && c > Rational::zero()) || (!up && c < Rational::zero()) {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub fn visibility_polygon(poly: &Polygon, reach: impl Into<Reach>) -> Result<Graph> {
    let reach = reach.into();
    poly.validate()?;
    let pts = poly.vertices();
    let edges = poly.boundary_segments();
    let unit = Rational::one();
    let mut grid = Grid::new(&edges, &unit);
    let right = pts.iter().map(|p| p.x.clone()).max().unwrap_or_default() + Rational::one();
    let mut locator = Locator { edges: &edges, grid: Grid::new(&edges, &unit), right };
    let mut g = Graph::new(pts.len());
    for (u, v) in candidate_pairs(&pts, &unit, reach) {
        let (p, q) = (&pts[u], &pts[v]);
        let near = grid.query(p, q, &unit);
        if segment_inside_with(p, q, &edges, near, |m| locator.covers(m)) {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Visibility graph of any scene.
pub fn visibility(scene: &Scene, reach: impl Into<Reach>) -> Result<Graph> {
    match scene {
        Scene::Points(p) => visibility_points(p, reach),
        Scene::Segments(s) => visibility_segments(s, reach),
        Scene::Polygon(p) => visibility_polygon(p, reach),
    }
}

/// Unit disk visibility graph under the default closed threshold.
pub fn udvg(scene: &Scene) -> Result<Graph> {
    visibility(scene, Reach::default())
}
