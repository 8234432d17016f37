//! Exact rational geometry: points, segments, polygons with holes, and the
//! predicates the visibility constructions are built on.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{self, Hit};

pub type Rational = BigRational;

/// Builds `n/d` from machine integers. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"-3"`, `"21/10"` or `"2.15"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Canonical text form: `"3"`, `"-21/10"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    /// Parses a pair of coordinate strings.
    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
    }

    /// Shorthand for tests and fixtures: `Point::dec("1.85", "2.15")`.
    pub fn dec(x: &str, y: &str) -> Self {
        Point::parse(x, y).expect("fixture coordinate")
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let two = int(2);
        Point::new((&self.x + &other.x) / &two, (&self.y + &other.y) / &two)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::Validation(format!("zero-length segment at {a:?}")));
        }
        Ok(Segment { a, b })
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub outer: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThresholdPolicy {
    /// Distance at most 1.
    #[default]
    Closed,
    /// Distance strictly below 1.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    PointTouch(Point),
    ProperCross,
    CollinearOverlap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    StrictInterior,
    OnBoundary,
    Exterior,
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match kernel::sign(p, q, r) {
        Ordering::Greater => Orientation::CounterClockwise,
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
    }
}

pub fn sq_dist(p: &Point, q: &Point) -> Rational {
    kernel::sq_dist(p, q)
}

pub fn within_unit(p: &Point, q: &Point, policy: ThresholdPolicy) -> bool {
    policy.admits(&sq_dist(p, q), &Rational::one())
}

impl ThresholdPolicy {
    /// Compares a squared distance against a squared unit.
    pub(crate) fn admits<T: Ord>(&self, d2: &T, unit2: &T) -> bool {
        match self {
            ThresholdPolicy::Closed => d2 <= unit2,
            ThresholdPolicy::Strict => d2 < unit2,
        }
    }
}

/// `r` lies on the closed segment `pq`.
pub fn on_segment(p: &Point, q: &Point, r: &Point) -> bool {
    kernel::on_segment(p, q, r)
}

/// `r` lies on the segment `pq` with both endpoints excluded.
pub fn on_open_segment(p: &Point, q: &Point, r: &Point) -> bool {
    kernel::on_open_segment(p, q, r)
}

pub fn segments_intersect(s: &Segment, t: &Segment) -> Intersection {
    match kernel::intersect(&s.a, &s.b, &t.a, &t.b) {
        Hit::Empty => Intersection::Empty,
        Hit::Touch(p) => Intersection::PointTouch(p),
        Hit::Cross => Intersection::ProperCross,
        Hit::Overlap => Intersection::CollinearOverlap,
    }
}

pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (&Point, &Point)> {
    let n = ring.len();
    (0..n).map(move |i| (&ring[i], &ring[(i + 1) % n]))
}

/// Location of `p` relative to a single closed ring.
pub fn point_in_ring(p: &Point, ring: &[Point]) -> Location {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if on_segment(a, b, p) {
            return Location::OnBoundary;
        }
        // Half-open crossing rule on the horizontal ray to +x.
        if (a.y > p.y) != (b.y > p.y) {
            let c = kernel::cross(a, b, p);
            let up = b.y > a.y;
            if (up && c > Rational::zero()) || (!up && c < Rational::zero()) {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::StrictInterior
    } else {
        Location::Exterior
    }
}

pub fn point_in_polygon(p: &Point, poly: &Polygon) -> Location {
    match point_in_ring(p, &poly.outer) {
        Location::Exterior => return Location::Exterior,
        Location::OnBoundary => return Location::OnBoundary,
        Location::StrictInterior => {}
    }
    for h in &poly.holes {
        match point_in_ring(p, h) {
            Location::StrictInterior => return Location::Exterior,
            Location::OnBoundary => return Location::OnBoundary,
            Location::Exterior => {}
        }
    }
    Location::StrictInterior
}

/// Twice the signed area of a ring; positive for counter-clockwise rings.
pub fn signed_area2(ring: &[Point]) -> Rational {
    ring_edges(ring).fold(Rational::zero(), |acc, (a, b)| acc + (&a.x * &b.y - &b.x * &a.y))
}

/// Which rings own the first pair of boundary edges that meet illegally.
fn first_bad_edge_pair(rings: &[&[Point]]) -> Option<(usize, usize)> {
    let mut edges = Vec::new();
    let mut owner = Vec::new();
    for (r, ring) in rings.iter().enumerate() {
        for (i, (a, b)) in ring_edges(ring).enumerate() {
            edges.push((a.clone(), b.clone()));
            owner.push((r, i));
        }
    }
    let one = Rational::one();
    let mut grid = kernel::Grid::new(&edges, &one);
    for (i, (a, b)) in edges.iter().enumerate() {
        for j in grid.query(a, b, &one) {
            if j <= i {
                continue;
            }
            let (c, d) = &edges[j];
            if !kernel::boxes_meet(a, b, c, d) {
                continue;
            }
            let ((ri, ii), (rj, jj)) = (owner[i], owner[j]);
            let n = rings[ri].len();
            let adjacent = ri == rj && (jj == ii + 1 || (ii == 0 && jj == n - 1));
            let hit = kernel::intersect(a, b, c, d);
            // Neighbouring edges may only share their common vertex.
            let ok = if adjacent { matches!(hit, Hit::Touch(_)) } else { hit == Hit::Empty };
            if !ok {
                return Some((ri, rj));
            }
        }
    }
    None
}

impl Polygon {
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let p = Polygon { outer, holes };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPolygon(m));
        let name = |r: usize| if r == 0 { "outer ring".to_string() } else { format!("hole {}", r - 1) };
        let rings: Vec<&[Point]> = std::iter::once(&self.outer).chain(self.holes.iter()).map(|r| r.as_slice()).collect();
        for (r, ring) in rings.iter().enumerate() {
            let distinct: std::collections::BTreeSet<&Point> = ring.iter().collect();
            if ring.len() < 3 || distinct.len() < ring.len() || signed_area2(ring).is_zero() {
                return bad(format!("{} is not a simple ring with at least 3 vertices", name(r)));
            }
        }
        match first_bad_edge_pair(&rings) {
            Some((r, s)) if r == s => return bad(format!("{} is not a simple ring with at least 3 vertices", name(r))),
            Some((0, s)) => return bad(format!("hole {} touches the outer ring", s - 1)),
            Some((r, s)) => return bad(format!("holes {} and {} overlap", r - 1, s - 1)),
            None => {}
        }
        for (i, h) in self.holes.iter().enumerate() {
            if point_in_ring(&h[0], &self.outer) != Location::StrictInterior {
                return bad(format!("hole {i} is not inside the outer ring"));
            }
            for (j, g) in self.holes.iter().enumerate().take(i) {
                if point_in_ring(&h[0], g) != Location::Exterior || point_in_ring(&g[0], h) != Location::Exterior {
                    return bad(format!("holes {j} and {i} overlap"));
                }
            }
        }
        Ok(())
    }

    /// All ring vertices, outer ring first and then each hole.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v = self.outer.clone();
        for h in &self.holes {
            v.extend(h.iter().cloned());
        }
        v
    }

    /// Boundary edges as pairs of flattened vertex indices.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut base = 0;
        for ring in std::iter::once(&self.outer).chain(self.holes.iter()) {
            let n = ring.len();
            for i in 0..n {
                out.push((base + i, base + (i + 1) % n));
            }
            base += n;
        }
        out
    }

    pub fn boundary_segments(&self) -> Vec<(Point, Point)> {
        std::iter::once(&self.outer)
            .chain(self.holes.iter())
            .flat_map(|r| ring_edges(r).map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>())
            .collect()
    }
}

/// Largest absolute coordinate over a point set.
pub fn max_abs_coord(points: &[Point]) -> Rational {
    points
        .iter()
        .flat_map(|p| [p.x.abs(), p.y.abs()])
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2.1").unwrap(), rat(21, 10));
        assert_eq!(parse_rational("21/10").unwrap(), rat(21, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
        assert_eq!(format_rational(&rat(42, 20)), "21/10");
        assert_eq!(format_rational(&int(-3)), "-3");
    }

    #[test]
    fn zero_length_segment_rejected() {
        assert!(Segment::new(Point::from_ints(1, 1), Point::from_ints(1, 1)).is_err());
    }

    #[test]
    fn ring_simplicity() {
        let sq = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(1, 1), Point::from_ints(0, 1)];
        assert!(Polygon::new(sq.clone(), vec![]).is_ok());
        let bow = vec![Point::from_ints(0, 0), Point::from_ints(1, 1), Point::from_ints(1, 0), Point::from_ints(0, 1)];
        assert!(Polygon::new(bow, vec![]).is_err());
        let flat = vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(2, 0)];
        assert!(Polygon::new(flat, vec![]).is_err());
        let spike = vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(1, 0), Point::from_ints(1, 1)];
        assert!(Polygon::new(spike, vec![]).is_err());
    }

    #[test]
    fn hole_validation() {
        let outer = vec![Point::from_ints(0, 0), Point::from_ints(4, 0), Point::from_ints(4, 4), Point::from_ints(0, 4)];
        let h = vec![Point::from_ints(1, 1), Point::from_ints(2, 1), Point::from_ints(2, 2), Point::from_ints(1, 2)];
        assert!(Polygon::new(outer.clone(), vec![h.clone()]).is_ok());
        let outside = vec![Point::from_ints(5, 5), Point::from_ints(6, 5), Point::from_ints(6, 6)];
        assert!(Polygon::new(outer.clone(), vec![outside]).is_err());
        let touching = vec![Point::from_ints(0, 1), Point::from_ints(1, 1), Point::from_ints(1, 2)];
        assert!(Polygon::new(outer.clone(), vec![touching]).is_err());
        assert!(Polygon::new(outer, vec![h.clone(), h]).is_err());
    }
}
