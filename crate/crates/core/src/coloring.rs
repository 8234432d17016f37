//! Exact 3-coloring: witness search with precoloring, and exhaustive
//! enumeration with optional quotient by color permutations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::visibility::Graph;

/// Total assignment vertex → color in `{0, 1, 2}`.
pub type Coloring = Vec<u8>;

/// Partial assignment vertex → color.
pub type PartialColoring = BTreeMap<usize, u8>;

pub const DEFAULT_ENUM_CAP: usize = 40;

/// Enumeration cap, overridable with `UDVG_ENUM_CAP`.
pub fn enum_cap() -> usize {
    std::env::var("UDVG_ENUM_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_ENUM_CAP)
}

pub fn verify_coloring(g: &Graph, c: &[u8]) -> Result<bool> {
    if c.len() != g.n {
        return Err(Error::IncompleteColoring(c.len(), g.n));
    }
    if let Some(v) = c.iter().position(|&x| x > 2) {
        return Err(Error::Validation(format!("vertex {v} has color {} outside 0..=2", c[v])));
    }
    Ok(g.edges().all(|(u, v)| c[u] != c[v]))
}

/// Finds a proper 3-coloring extending `pre`, or `None` if none exists.
///
/// The graph is first shrunk by rules that preserve colorability: vertices
/// forced to share a color are merged (see [`merge_forced`]), then vertices
/// that can always be colored last are set aside. What remains is searched
/// by backtracking with unit propagation over color domains, DSATUR choice
/// order and learned conflict clauses. The result is deterministic.
pub fn solve_3coloring(g: &Graph, pre: &PartialColoring) -> Option<Coloring> {
    if pre.iter().any(|(&v, &c)| v >= g.n || c > 2) {
        return None;
    }
    let (class, quotient) = merge_forced(g)?;
    let mut qpre = PartialColoring::new();
    for (&v, &c) in pre {
        if *qpre.entry(class[v]).or_insert(c) != c {
            return None;
        }
    }
    let qc = solve_core(&quotient, &qpre)?;
    let c: Coloring = class.iter().map(|&k| qc[k]).collect();
    Some(if pre.is_empty() { canonical_form(&c) } else { c })
}

/// Contracts every pair of non-adjacent vertices that share two adjacent
/// neighbors, since both must take the third color of that edge, until no
/// such pair remains. Returns each vertex's class in the quotient graph, or
/// `None` if a K4 turns up along the way.
pub fn merge_forced(g: &Graph) -> Option<(Vec<usize>, Graph)> {
    let mut nbr: Vec<BTreeSet<usize>> = g.adjacency().into_iter().map(|v| v.into_iter().collect()).collect();
    let mut parent: Vec<usize> = (0..g.n).collect();
    let mut queued = vec![true; g.n];
    let mut work: VecDeque<usize> = (0..g.n).collect();
    'next: while let Some(a) = work.pop_front() {
        queued[a] = false;
        if parent[a] != a {
            continue;
        }
        for &b in &nbr[a] {
            let common: Vec<usize> = nbr[a].intersection(&nbr[b]).copied().collect();
            if common.len() < 2 {
                continue;
            }
            for (i, &u) in common.iter().enumerate() {
                if common[i + 1..].iter().any(|w| nbr[u].contains(w)) {
                    return None;
                }
            }
            let keep = common[0];
            for &w in &common[1..] {
                parent[w] = keep;
                for x in std::mem::take(&mut nbr[w]) {
                    nbr[x].remove(&w);
                    nbr[x].insert(keep);
                    nbr[keep].insert(x);
                }
            }
            for v in std::iter::once(keep).chain(nbr[keep].iter().copied()) {
                if !queued[v] {
                    queued[v] = true;
                    work.push_back(v);
                }
            }
            if !queued[a] {
                queued[a] = true;
                work.push_back(a);
            }
            continue 'next;
        }
    }
    let find = |mut v: usize| {
        while parent[v] != v {
            v = parent[v];
        }
        v
    };
    let mut index = vec![usize::MAX; g.n];
    let mut k = 0;
    for v in 0..g.n {
        if parent[v] == v {
            index[v] = k;
            k += 1;
        }
    }
    let class: Vec<usize> = (0..g.n).map(|v| index[find(v)]).collect();
    let quotient = Graph::from_edges(k, g.edges().map(|(u, v)| (class[u], class[v])));
    Some((class, quotient))
}

enum SetAside {
    /// At most two neighbors remained; takes any free color.
    Free(usize),
    /// Every remaining neighbor was also a neighbor of the second vertex,
    /// which is not adjacent to it; copies that vertex's color.
    Copy(usize, usize),
}

/// Sets aside vertices that any coloring of the rest extends to, searches
/// what is left, then colors the set-aside vertices in reverse order.
fn solve_core(g: &Graph, pre: &PartialColoring) -> Option<Coloring> {
    let mut nbr: Vec<BTreeSet<usize>> = g.adjacency().into_iter().map(|v| v.into_iter().collect()).collect();
    let mut gone = vec![false; g.n];
    let mut order = Vec::new();
    loop {
        let before = order.len();
        for u in 0..g.n {
            if gone[u] || pre.contains_key(&u) {
                continue;
            }
            let step = if nbr[u].len() <= 2 {
                SetAside::Free(u)
            } else {
                let x = *nbr[u].iter().next().unwrap();
                match nbr[x].iter().find(|&&w| w != u && !nbr[u].contains(&w) && nbr[u].is_subset(&nbr[w])) {
                    Some(&w) => SetAside::Copy(u, w),
                    None => continue,
                }
            };
            gone[u] = true;
            for x in std::mem::take(&mut nbr[u]) {
                nbr[x].remove(&u);
            }
            order.push(step);
        }
        if order.len() == before {
            break;
        }
    }

    let core: Vec<usize> = (0..g.n).filter(|&v| !gone[v]).collect();
    let mut at = vec![usize::MAX; g.n];
    for (i, &v) in core.iter().enumerate() {
        at[v] = i;
    }
    let cpre = pre.iter().map(|(&v, &c)| (at[v], c)).collect();
    let cc = Cdcl::new(&g.induced(&core), &cpre)?.solve()?;

    let adj = g.adjacency();
    let mut color = vec![u8::MAX; g.n];
    for (i, &v) in core.iter().enumerate() {
        color[v] = cc[i];
    }
    for step in order.iter().rev() {
        match *step {
            SetAside::Free(v) => {
                let used = adj[v].iter().filter(|&&w| color[w] != u8::MAX).fold(0u8, |m, &w| m | 1 << color[w]);
                color[v] = (0..3).find(|c| used & (1 << c) == 0).expect("at most two colored neighbors");
            }
            SetAside::Copy(v, w) => color[v] = color[w],
        }
    }
    Some(color)
}

/// Literal `2 * var + neg`, where `var = 3 * vertex + color` reads "vertex has color".
type Lit = u32;

fn lit(v: usize, c: u8) -> Lit {
    ((3 * v + c as usize) << 1) as Lit
}

const UNSET: i8 = -1;

/// Clause-learning search over the color indicator variables. Decisions
/// follow DSATUR: the uncolored vertex with the fewest colors left, then the
/// highest degree, then the lowest index, tries its lowest color.
struct Cdcl {
    adj: Vec<Vec<usize>>,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    limits: Vec<usize>,
    head: usize,
    seen: Vec<bool>,
}

impl Cdcl {
    /// Returns `None` when the clauses are refuted before any decision.
    fn new(g: &Graph, pre: &PartialColoring) -> Option<Self> {
        let vars = 3 * g.n;
        let mut s = Cdcl {
            adj: g.adjacency(),
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * vars],
            value: vec![UNSET; vars],
            level: vec![0; vars],
            reason: vec![None; vars],
            trail: Vec::new(),
            limits: Vec::new(),
            head: 0,
            seen: vec![false; vars],
        };
        for v in 0..g.n {
            s.add(vec![lit(v, 0), lit(v, 1), lit(v, 2)]);
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                s.add(vec![lit(v, a) ^ 1, lit(v, b) ^ 1]);
            }
        }
        for (u, v) in g.edges() {
            for c in 0..3 {
                s.add(vec![lit(u, c) ^ 1, lit(v, c) ^ 1]);
            }
        }
        let mut units: Vec<Lit> = pre.iter().map(|(&v, &c)| lit(v, c)).collect();
        if pre.is_empty() {
            // Colors are interchangeable, so pin one edge's endpoints.
            if let Some((u, v)) = g.edges().next() {
                units.extend([lit(u, 0), lit(v, 1)]);
            } else if g.n > 0 {
                units.push(lit(0, 0));
            }
        }
        for l in units {
            match s.val(l) {
                0 => return None,
                1 => {}
                _ => s.enqueue(l, None),
            }
        }
        if s.propagate().is_some() {
            return None;
        }
        Some(s)
    }

    fn add(&mut self, c: Vec<Lit>) {
        let i = self.clauses.len();
        self.watches[c[0] as usize].push(i);
        self.watches[c[1] as usize].push(i);
        self.clauses.push(c);
    }

    /// 1 true, 0 false, -1 unassigned.
    fn val(&self, l: Lit) -> i8 {
        match self.value[(l >> 1) as usize] {
            UNSET => UNSET,
            x => x ^ (l & 1) as i8,
        }
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = (l >> 1) as usize;
        self.value[v] = 1 ^ (l & 1) as i8;
        self.level[v] = self.limits.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns a falsified clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head] ^ 1;
            self.head += 1;
            let watching = std::mem::take(&mut self.watches[falsified as usize]);
            let mut kept = Vec::with_capacity(watching.len());
            let mut conflict = None;
            for (k, &ci) in watching.iter().enumerate() {
                if conflict.is_some() {
                    kept.extend_from_slice(&watching[k..]);
                    break;
                }
                let c = &mut self.clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.val(first) == 1 {
                    kept.push(ci);
                    continue;
                }
                let c = &self.clauses[ci];
                if let Some(j) = (2..c.len()).find(|&j| self.val(c[j]) != 0) {
                    let c = &mut self.clauses[ci];
                    c.swap(1, j);
                    let w = c[1] as usize;
                    self.watches[w].push(ci);
                    continue;
                }
                kept.push(ci);
                if self.val(first) == 0 {
                    conflict = Some(ci);
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            self.watches[falsified as usize] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP learned clause and the level to return to.
    fn analyze(&mut self, mut ci: usize) -> (Vec<Lit>, u32) {
        let here = self.limits.len() as u32;
        let mut learnt = vec![0];
        let mut pending = 0;
        let mut idx = self.trail.len();
        let mut skip: Option<Lit> = None;
        loop {
            for &q in &self.clauses[ci] {
                if Some(q) == skip {
                    continue;
                }
                let v = (q >> 1) as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                if self.level[v] == here {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if self.seen[(p >> 1) as usize] {
                    break p;
                }
            };
            let v = (p >> 1) as usize;
            self.seen[v] = false;
            pending -= 1;
            if pending == 0 {
                learnt[0] = p ^ 1;
                break;
            }
            ci = self.reason[v].expect("implied literal has a reason");
            skip = Some(p);
        }
        for &q in &learnt[1..] {
            self.seen[(q >> 1) as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let i = (1..learnt.len()).max_by_key(|&i| self.level[(learnt[i] >> 1) as usize]).unwrap();
            learnt.swap(1, i);
            back = self.level[(learnt[1] >> 1) as usize];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, to: u32) {
        if self.limits.len() as u32 <= to {
            return;
        }
        let mark = self.limits[to as usize];
        for l in self.trail.drain(mark..) {
            self.value[(l >> 1) as usize] = UNSET;
        }
        self.limits.truncate(to as usize);
        self.head = mark;
    }

    fn pick(&self) -> Option<Lit> {
        let mut best: Option<((u32, usize, usize), Lit)> = None;
        for v in 0..self.adj.len() {
            let vals = [0, 1, 2].map(|c| self.val(lit(v, c)));
            if vals.contains(&1) {
                continue;
            }
            let open: Vec<u8> = (0..3u8).filter(|&c| vals[c as usize] == UNSET).collect();
            let key = (open.len() as u32, usize::MAX - self.adj[v].len(), v);
            if best.as_ref().map_or(true, |b| key < b.0) {
                best = Some((key, lit(v, open[0])));
            }
        }
        best.map(|b| b.1)
    }

    fn solve(mut self) -> Option<Coloring> {
        loop {
            if let Some(ci) = self.propagate() {
                if self.limits.is_empty() {
                    return None;
                }
                let (learnt, back) = self.analyze(ci);
                self.backtrack(back);
                let unit = learnt[0];
                if learnt.len() == 1 {
                    self.enqueue(unit, None);
                } else {
                    let i = self.clauses.len();
                    self.add(learnt);
                    self.enqueue(unit, Some(i));
                }
                continue;
            }
            let Some(d) = self.pick() else {
                let n = self.adj.len();
                return Some((0..n).map(|v| (0..3u8).find(|&c| self.val(lit(v, c)) == 1).unwrap()).collect());
            };
            self.limits.push(self.trail.len());
            self.enqueue(d, None);
        }
    }
}

fn permute_to_canonical(c: &[u8]) -> Coloring {
    let mut map = [u8::MAX; 3];
    let mut fresh = 0;
    c.iter()
        .map(|&x| {
            if map[x as usize] == u8::MAX {
                map[x as usize] = fresh;
                fresh += 1;
            }
            map[x as usize]
        })
        .collect()
}

/// Representative of `c` under color permutations: the lexicographically least orbit member.
pub fn canonical_form(c: &[u8]) -> Coloring {
    permute_to_canonical(c)
}

pub fn enumerate_3colorings(g: &Graph, up_to_permutation: bool) -> Result<Vec<Coloring>> {
    enumerate_3colorings_capped(g, up_to_permutation, enum_cap())
}

/// All proper 3-colorings in lexicographic order.
///
/// With `up_to_permutation` only canonical forms are produced: reading
/// vertices in index order, each new color is the smallest unused one.
pub fn enumerate_3colorings_capped(g: &Graph, up_to_permutation: bool, cap: usize) -> Result<Vec<Coloring>> {
    if g.n > cap {
        return Err(Error::TooLargeToEnumerate(g.n, cap));
    }
    let adj = g.adjacency();
    let back: Vec<Vec<usize>> = adj.iter().enumerate().map(|(v, ns)| ns.iter().copied().filter(|&w| w < v).collect()).collect();
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(g.n);
    fn rec(v: usize, back: &[Vec<usize>], cur: &mut Vec<u8>, top: u8, canon: bool, out: &mut Vec<Coloring>) {
        if v == back.len() {
            out.push(cur.clone());
            return;
        }
        let limit = if canon { (top + 1).min(3) } else { 3 };
        for c in 0..limit {
            if back[v].iter().any(|&w| cur[w] == c) {
                continue;
            }
            cur.push(c);
            rec(v + 1, back, cur, top.max(c + 1), canon, out);
            cur.pop();
        }
    }
    rec(0, &back, &mut cur, 0, up_to_permutation, &mut out);
    Ok(out)
}

/// Whether `g` contains a triangle.
pub fn has_triangle(g: &Graph) -> bool {
    let adj = g.adjacency();
    g.edges().any(|(u, v)| adj[u].iter().any(|&w| w != v && g.has_edge(w, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))))
    }

    #[test]
    fn k3_first_witness() {
        assert_eq!(solve_3coloring(&complete(3), &PartialColoring::new()), Some(vec![0, 1, 2]));
    }

    #[test]
    fn k4_unsat() {
        assert_eq!(solve_3coloring(&complete(4), &PartialColoring::new()), None);
    }

    #[test]
    fn precolor_conflicts() {
        let g = complete(2);
        let pre = PartialColoring::from([(0, 1), (1, 1)]);
        assert_eq!(solve_3coloring(&g, &pre), None);
        let pre = PartialColoring::from([(1, 2)]);
        assert_eq!(solve_3coloring(&g, &pre), Some(vec![0, 2]));
        let pre = PartialColoring::from([(0, 5)]);
        assert_eq!(solve_3coloring(&g, &pre), None);
    }

    #[test]
    fn empty_graph() {
        assert_eq!(solve_3coloring(&Graph::new(0), &PartialColoring::new()), Some(vec![]));
        assert_eq!(enumerate_3colorings_capped(&Graph::new(0), true, 40).unwrap(), vec![Vec::<u8>::new()]);
        assert_eq!(enumerate_3colorings_capped(&Graph::new(2), false, 40).unwrap().len(), 9);
        assert_eq!(enumerate_3colorings_capped(&Graph::new(2), true, 40).unwrap().len(), 2);
    }

    #[test]
    fn verify_rejects_partial() {
        assert!(matches!(verify_coloring(&complete(3), &[0, 1]), Err(Error::IncompleteColoring(2, 3))));
        assert!(verify_coloring(&complete(3), &[0, 1, 2]).unwrap());
        assert!(!verify_coloring(&complete(3), &[0, 0, 1]).unwrap());
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(enumerate_3colorings_capped(&Graph::new(5), true, 4), Err(Error::TooLargeToEnumerate(5, 4))));
    }

    #[test]
    fn canonical_relabels_by_first_appearance() {
        assert_eq!(canonical_form(&[2, 0, 2, 1]), vec![0, 1, 0, 2]);
    }
}
