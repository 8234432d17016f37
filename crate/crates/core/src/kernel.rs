//! Exact predicates shared by the rational API and the scaled-integer fast path,
//! plus a uniform grid for pruning candidate pairs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::geometry::{Point, Rational};

pub(crate) trait Coord: Clone + Ord + Debug {
    fn sign(&self) -> Ordering;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `floor(self / unit)` as a grid index.
    fn cell(&self, unit: &Self) -> i64;
}

impl Coord for i128 {
    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn cell(&self, unit: &Self) -> i64 {
        self.div_euclid(*unit) as i64
    }
}

impl Coord for Rational {
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn cell(&self, unit: &Self) -> i64 {
        (self / unit).floor().to_integer().to_i64().unwrap_or(i64::MAX)
    }
}

pub(crate) trait Xy: Clone + PartialEq {
    type T: Coord;
    fn x(&self) -> &Self::T;
    fn y(&self) -> &Self::T;
}

impl Xy for Point {
    type T = Rational;
    fn x(&self) -> &Rational {
        &self.x
    }
    fn y(&self) -> &Rational {
        &self.y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct IPt {
    pub x: i128,
    pub y: i128,
}

impl Xy for IPt {
    type T = i128;
    fn x(&self) -> &i128 {
        &self.x
    }
    fn y(&self) -> &i128 {
        &self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Hit<P> {
    Empty,
    Touch(P),
    Cross,
    Overlap,
}

pub(crate) fn cross<P: Xy>(p: &P, q: &P, r: &P) -> P::T {
    let a = q.x().sub(p.x()).mul(&r.y().sub(p.y()));
    let b = q.y().sub(p.y()).mul(&r.x().sub(p.x()));
    a.sub(&b)
}

pub(crate) fn sign<P: Xy>(p: &P, q: &P, r: &P) -> Ordering {
    cross(p, q, r).sign()
}

pub(crate) fn sq_dist<P: Xy>(p: &P, q: &P) -> P::T {
    let dx = p.x().sub(q.x());
    let dy = p.y().sub(q.y());
    dx.mul(&dx).add(&dy.mul(&dy))
}

/// `r` lies in the bounding box of `pq`.
pub(crate) fn in_box<P: Xy>(p: &P, q: &P, r: &P) -> bool {
    let between = |a: &P::T, b: &P::T, c: &P::T| if a <= b { a <= c && c <= b } else { b <= c && c <= a };
    between(p.x(), q.x(), r.x()) && between(p.y(), q.y(), r.y())
}

pub(crate) fn on_segment<P: Xy>(p: &P, q: &P, r: &P) -> bool {
    sign(p, q, r) == Ordering::Equal && in_box(p, q, r)
}

pub(crate) fn on_open_segment<P: Xy>(p: &P, q: &P, r: &P) -> bool {
    r != p && r != q && on_segment(p, q, r)
}

pub(crate) fn intersect<P: Xy>(p1: &P, p2: &P, q1: &P, q2: &P) -> Hit<P> {
    use Ordering::Equal as C;
    let o1 = sign(p1, p2, q1);
    let o2 = sign(p1, p2, q2);
    let o3 = sign(q1, q2, p1);
    let o4 = sign(q1, q2, p2);

    if o1 == C && o2 == C {
        // All four points on one line: project on a varying axis.
        let along_x = p1.x() != p2.x();
        let key = |p: &P| if along_x { p.x().clone() } else { p.y().clone() };
        let (s_lo, s_hi) = minmax(key(p1), key(p2));
        let (t_lo, t_hi) = minmax(key(q1), key(q2));
        let lo = s_lo.max(t_lo);
        let hi = s_hi.min(t_hi);
        return match lo.cmp(&hi) {
            Ordering::Greater => Hit::Empty,
            Ordering::Equal => {
                let pick = [p1, p2, q1, q2].into_iter().find(|p| key(p) == lo).unwrap();
                Hit::Touch(pick.clone())
            }
            Ordering::Less => Hit::Overlap,
        };
    }

    if o1 != o2 && o3 != o4 && o1 != C && o2 != C && o3 != C && o4 != C {
        return Hit::Cross;
    }
    if o1 == C && in_box(p1, p2, q1) {
        return Hit::Touch(q1.clone());
    }
    if o2 == C && in_box(p1, p2, q2) {
        return Hit::Touch(q2.clone());
    }
    if o3 == C && in_box(q1, q2, p1) {
        return Hit::Touch(p1.clone());
    }
    if o4 == C && in_box(q1, q2, p2) {
        return Hit::Touch(p2.clone());
    }
    Hit::Empty
}

fn minmax<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Rescales rational points to integers sharing one denominator, when the
/// result stays small enough that squared distances and cross products fit
/// in `i128`. Returns the points and the scaled length of one unit.
pub(crate) fn to_integer_frame(points: &[Point]) -> Option<(Vec<IPt>, i128)> {
    const MAX_UNIT: i64 = 1 << 24;
    const MAX_ABS: i64 = 1 << 48;
    let mut unit = BigInt::from(1);
    for p in points {
        for c in [&p.x, &p.y] {
            unit = unit.lcm(c.denom());
            if unit > BigInt::from(MAX_UNIT) {
                return None;
            }
        }
    }
    let unit_r = Rational::from_integer(unit.clone());
    let limit = BigInt::from(MAX_ABS);
    let scale = |c: &Rational| -> Option<i128> {
        let v = (c * &unit_r).to_integer();
        if v.abs() > limit {
            None
        } else {
            v.to_i128()
        }
    };
    let pts = points
        .iter()
        .map(|p| Some(IPt { x: scale(&p.x)?, y: scale(&p.y)? }))
        .collect::<Option<Vec<_>>>()?;
    Some((pts, unit.to_i128()?))
}

type Cell = (i64, i64);

/// Buckets axis-aligned boxes by the unit cells they cover. Boxes spanning
/// too many cells go to a list that every query returns.
pub(crate) struct Grid {
    cells: HashMap<Cell, Vec<usize>>,
    wide: Vec<usize>,
    stamp: Vec<u32>,
    round: u32,
}

const WIDE_CELLS: i64 = 256;

impl Grid {
    pub fn new<P: Xy>(boxes: &[(P, P)], unit: &P::T) -> Self {
        let mut g = Grid { cells: HashMap::new(), wide: Vec::new(), stamp: vec![0; boxes.len()], round: 0 };
        for (i, (a, b)) in boxes.iter().enumerate() {
            let (lo, hi) = cell_range(a, b, unit);
            if (hi.0 - lo.0 + 1).saturating_mul(hi.1 - lo.1 + 1) > WIDE_CELLS {
                g.wide.push(i);
                continue;
            }
            for cx in lo.0..=hi.0 {
                for cy in lo.1..=hi.1 {
                    g.cells.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        g
    }

    /// Indices of boxes sharing a cell with the box spanned by `a`, `b`, each
    /// reported once, in ascending order.
    pub fn query<P: Xy>(&mut self, a: &P, b: &P, unit: &P::T) -> Vec<usize> {
        let (lo, hi) = cell_range(a, b, unit);
        if (hi.0 - lo.0 + 1).saturating_mul(hi.1 - lo.1 + 1) > WIDE_CELLS {
            return (0..self.stamp.len()).collect();
        }
        self.collect(lo, hi)
    }

    /// Indices whose boxes touch the 3x3 block of cells around `p`.
    pub fn near<P: Xy>(&mut self, p: &P, unit: &P::T) -> Vec<usize> {
        let (cx, cy) = (p.x().cell(unit), p.y().cell(unit));
        self.collect((cx - 1, cy - 1), (cx + 1, cy + 1))
    }

    fn collect(&mut self, lo: Cell, hi: Cell) -> Vec<usize> {
        self.round += 1;
        let mut out = Vec::new();
        for cx in lo.0..=hi.0 {
            for cy in lo.1..=hi.1 {
                if let Some(v) = self.cells.get(&(cx, cy)) {
                    for &i in v {
                        if self.stamp[i] != self.round {
                            self.stamp[i] = self.round;
                            out.push(i);
                        }
                    }
                }
            }
        }
        for &i in &self.wide {
            if self.stamp[i] != self.round {
                self.stamp[i] = self.round;
                out.push(i);
            }
        }
        out.sort_unstable();
        out
    }
}

fn cell_range<P: Xy>(a: &P, b: &P, unit: &P::T) -> (Cell, Cell) {
    let (ax, bx) = (a.x().cell(unit), b.x().cell(unit));
    let (ay, by) = (a.y().cell(unit), b.y().cell(unit));
    ((ax.min(bx), ay.min(by)), (ax.max(bx), ay.max(by)))
}

pub(crate) fn boxes_meet<P: Xy>(a: &P, b: &P, c: &P, d: &P) -> bool {
    let lo = |u: &P::T, v: &P::T| if u <= v { u.clone() } else { v.clone() };
    let hi = |u: &P::T, v: &P::T| if u >= v { u.clone() } else { v.clone() };
    lo(a.x(), b.x()) <= hi(c.x(), d.x())
        && lo(c.x(), d.x()) <= hi(a.x(), b.x())
        && lo(a.y(), b.y()) <= hi(c.y(), d.y())
        && lo(c.y(), d.y()) <= hi(a.y(), b.y())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coord() -> impl Strategy<Value = Rational> {
        (-12i64..=12, prop::sample::select(vec![1i64, 2, 3, 5, 10])).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn point() -> impl Strategy<Value = Point> {
        (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
    }

    fn lift(h: Hit<IPt>, pts: &[Point], ipts: &[IPt]) -> Hit<Point> {
        match h {
            Hit::Empty => Hit::Empty,
            Hit::Cross => Hit::Cross,
            Hit::Overlap => Hit::Overlap,
            Hit::Touch(p) => Hit::Touch(pts[ipts.iter().position(|q| *q == p).unwrap()].clone()),
        }
    }

    proptest! {
        #[test]
        fn integer_frame_agrees_with_rationals(pts in prop::collection::vec(point(), 4)) {
            let (ipts, unit) = to_integer_frame(&pts).unwrap();
            let unit2 = Rational::from_integer((unit * unit).into());
            for (i, j, k) in [(0, 1, 2), (1, 2, 3), (0, 2, 3), (3, 1, 0)] {
                prop_assert_eq!(sign(&ipts[i], &ipts[j], &ipts[k]), sign(&pts[i], &pts[j], &pts[k]));
                prop_assert_eq!(on_segment(&ipts[i], &ipts[j], &ipts[k]), on_segment(&pts[i], &pts[j], &pts[k]));
            }
            let d2 = Rational::from_integer(sq_dist(&ipts[0], &ipts[1]).into());
            prop_assert_eq!(d2 / &unit2, sq_dist(&pts[0], &pts[1]));
            let degenerate = pts[0] == pts[1] || pts[2] == pts[3];
            if !degenerate {
                let hi = intersect(&ipts[0], &ipts[1], &ipts[2], &ipts[3]);
                prop_assert_eq!(lift(hi, &pts, &ipts), intersect(&pts[0], &pts[1], &pts[2], &pts[3]));
            }
        }
    }
}
