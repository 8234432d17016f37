//! Classification lemmas as executable operations: shrinking any point set
//! into a unit-diameter disk, searching for an induced claw with six leaves,
//! and nudging points into general position.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{orientation, Orientation, Point, Rational};
use crate::visibility::Graph;

/// Least power of two `M`, at least 1, with `M > phi * sqrt(2)`, where `phi`
/// is the largest `|coordinate|`. Every point then lies within `M / sqrt(2)`
/// of the origin.
pub fn unit_scale_factor(points: &[Point]) -> Result<Rational> {
    if points.is_empty() {
        return Err(Error::BadParameter("cannot scale an empty point set".into()));
    }
    let phi = points.iter().flat_map(|p| [p.x.abs(), p.y.abs()]).max().unwrap();
    let two = Rational::from_integer(BigInt::from(2));
    let bound = &phi * &phi * &two;
    let mut m = Rational::one();
    while &m * &m <= bound {
        m *= &two;
    }
    Ok(m)
}

/// Divides every coordinate by `2M`, placing all points strictly inside the
/// disk of diameter 1 centered at the origin.
pub fn scale_to_unit(points: &[Point]) -> Result<Vec<Point>> {
    let two_m = unit_scale_factor(points)? * Rational::from_integer(BigInt::from(2));
    Ok(points.iter().map(|p| Point::new(&p.x / &two_m, &p.y / &two_m)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claw {
    pub center: usize,
    pub leaves: [usize; 6],
}

/// Checks that `claw` is an induced K1,6 of `g`.
pub fn is_induced_k16(g: &Graph, claw: &Claw) -> bool {
    let mut all = claw.leaves.to_vec();
    all.push(claw.center);
    all.sort_unstable();
    all.dedup();
    all.len() == 7
        && all.iter().all(|&v| v < g.n)
        && claw.leaves.iter().all(|&l| g.has_edge(claw.center, l))
        && claw.leaves.iter().enumerate().all(|(i, &a)| claw.leaves[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
}

/// First induced K1,6 by center index, or `None`.
pub fn find_induced_k16(g: &Graph) -> Option<Claw> {
    let adj = g.adjacency();
    for c in 0..g.n {
        if adj[c].len() < 6 {
            continue;
        }
        let mut chosen = Vec::with_capacity(6);
        if independent_six(g, &adj[c], 0, &mut chosen) {
            let leaves: [usize; 6] = chosen.try_into().unwrap();
            return Some(Claw { center: c, leaves });
        }
    }
    None
}

fn independent_six(g: &Graph, pool: &[usize], from: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == 6 {
        return true;
    }
    if pool.len() - from < 6 - chosen.len() {
        return false;
    }
    for i in from..pool.len() {
        let v = pool[i];
        if chosen.iter().all(|&u| !g.has_edge(u, v)) {
            chosen.push(v);
            if independent_six(g, pool, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub const PERTURB_DEPTH: u32 = 64;

/// Moves points, in input order, off every line through two earlier
/// points. A point that already avoids them stays put; otherwise it tries
/// offsets of size `budget / 2^t`, t = 1..=64, turning a quarter each step.
pub fn perturb_general_position(points: &[Point], budget: &Rational) -> Result<Vec<Point>> {
    if !budget.is_positive() {
        return Err(Error::BadParameter("perturbation budget must be positive".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(format!("{p:?}")));
        }
    }
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        let mut step = budget.clone();
        let mut candidate = p.clone();
        let mut t = 0;
        while !clear_of(&out, &candidate) {
            if t == PERTURB_DEPTH {
                return Err(Error::PerturbationFailed);
            }
            t += 1;
            step *= &half;
            let (a, b) = (step.clone(), &step * &half);
            let (dx, dy) = match t % 4 {
                0 => (a, b),
                1 => (-b, a),
                2 => (-a, -b),
                _ => (b, -a),
            };
            candidate = Point::new(&p.x + dx, &p.y + dy);
        }
        out.push(candidate);
    }
    Ok(out)
}

fn clear_of(placed: &[Point], p: &Point) -> bool {
    placed.iter().all(|q| q != p)
        && placed
            .iter()
            .enumerate()
            .all(|(i, a)| placed[i + 1..].iter().all(|b| orientation(a, b, p) != Orientation::Collinear))
}

/// True when no three of the points are collinear.
pub fn in_general_position(points: &[Point]) -> bool {
    (0..points.len()).all(|k| clear_of(&points[..k], &points[k]))
}

/// Largest L-infinity displacement between matching points.
pub fn max_displacement(a: &[Point], b: &[Point]) -> Rational {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| [(&p.x - &q.x).abs(), (&p.y - &q.y).abs()])
        .max()
        .unwrap_or_else(Rational::zero)
}
