//! Edge-weighted configuration templates and their decompositions.
//!
//! Covers and matchings ignore weights entirely; only [`recognize`] looks at
//! them, to report whether all edges carry the same weight.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::{Ordering, Reverse};
use std::collections::HashMap;

/// Default vertex limit for the exhaustive cover search.
pub const COVER_LIMIT: usize = 20;
/// Default vertex limit for the exhaustive matching search.
pub const MATCHING_LIMIT: usize = 24;

const UNIFORM_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Simple undirected graph on `0..vertex_count` with nonzero edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor
    adj: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<WeightedGraph> {
        let mut adj = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} ({}, {}) out of range for {vertex_count} vertices",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("edge {i} is a self-loop at {}", e.u)));
            }
            if !e.w.is_finite() || e.w == 0.0 {
                return Err(Error::InvalidGraph(format!("edge {i} has weight {}", e.w)));
            }
            if adj[e.u].iter().any(|&(x, _)| x == e.v) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", e.u, e.v)));
            }
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(WeightedGraph { vertex_count, edges, adj })
    }

    /// Convenience constructor from `(u, v, w)` triples.
    pub fn from_triples(vertex_count: usize, triples: &[(usize, usize, f64)]) -> Result<WeightedGraph> {
        let edges = triples.iter().map(|&(u, v, w)| Edge { u, v, w }).collect();
        WeightedGraph::new(vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `(neighbor, edge index)` pairs of `v`, ordered by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge> {
        self.adj[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| &self.edges[self.adj[u][i].1])
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.vertex_count
    }

    /// True when every edge weight equals the first within a relative 1e-9.
    pub fn has_uniform_weights(&self) -> bool {
        match self.edges.first() {
            None => true,
            Some(first) => self
                .edges
                .iter()
                .all(|e| (e.w - first.w).abs() <= UNIFORM_REL_TOL * first.w.abs().max(e.w.abs())),
        }
    }
}

/// Named template families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `k` vertices, `k - 1` edges.
    Path(usize),
    Cycle(usize),
    /// A hub joined to `k` leaves.
    Star(usize),
    /// Perfect `c`-ary tree of height `h`.
    PerfectTree { c: usize, h: usize },
}

impl FamilyKind {
    pub fn vertex_count(&self) -> usize {
        match *self {
            FamilyKind::Path(k) | FamilyKind::Cycle(k) => k,
            FamilyKind::Star(k) => k + 1,
            FamilyKind::PerfectTree { c, h } => tree_size(c, h),
        }
    }

    pub fn edge_count(&self) -> usize {
        match *self {
            FamilyKind::Path(k) => k.saturating_sub(1),
            FamilyKind::Cycle(k) => k,
            FamilyKind::Star(k) => k,
            FamilyKind::PerfectTree { c, h } => tree_size(c, h) - 1,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamilyParams(msg));
        match *self {
            FamilyKind::Path(k) if k < 2 => bad(format!("path needs k >= 2, got {k}")),
            FamilyKind::Star(k) if k < 2 => bad(format!("star needs k >= 2, got {k}")),
            FamilyKind::Cycle(k) if k < 3 => bad(format!("cycle needs k >= 3, got {k}")),
            FamilyKind::PerfectTree { c, .. } if c < 2 => bad(format!("tree needs c >= 2, got {c}")),
            FamilyKind::PerfectTree { c, h } => {
                let mut size: usize = 1;
                let mut layer: usize = 1;
                for _ in 0..h {
                    layer = layer.checked_mul(c).ok_or_else(|| {
                        Error::InvalidFamilyParams(format!("tree T({c},{h}) is too large"))
                    })?;
                    size = size.checked_add(layer).ok_or_else(|| {
                        Error::InvalidFamilyParams(format!("tree T({c},{h}) is too large"))
                    })?;
                }
                let _ = size;
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// `(c^(h+1) - 1) / (c - 1)`
pub fn tree_size(c: usize, h: usize) -> usize {
    let mut size = 1;
    let mut layer = 1;
    for _ in 0..h {
        layer *= c;
        size += layer;
    }
    size
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Explicit(Vec<f64>),
    Uniform(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub weights: Weights,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, weights: Weights) -> FamilySpec {
        FamilySpec { kind, weights }
    }

    pub fn uniform(kind: FamilyKind, w: f64) -> FamilySpec {
        FamilySpec { kind, weights: Weights::Uniform(w) }
    }
}

/// Builds the canonical labelled member of a family.
///
/// Paths run `0-1-...-(k-1)`, cycles close with `(k-1, 0)`, stars put the hub
/// at 0, and trees use breadth-first numbering (children of `i` are
/// `c*i+1 ..= c*i+c`). Explicit weights are assigned in edge order.
pub fn make_family(spec: &FamilySpec) -> Result<WeightedGraph> {
    spec.kind.validate()?;
    let pairs: Vec<(usize, usize)> = match spec.kind {
        FamilyKind::Path(k) => (0..k - 1).map(|i| (i, i + 1)).collect(),
        FamilyKind::Cycle(k) => (0..k).map(|i| (i, (i + 1) % k)).collect(),
        FamilyKind::Star(k) => (1..=k).map(|j| (0, j)).collect(),
        FamilyKind::PerfectTree { c, h } => {
            let n = tree_size(c, h);
            (1..n).map(|v| ((v - 1) / c, v)).collect()
        }
    };
    let weights = match &spec.weights {
        Weights::Uniform(w) => vec![*w; pairs.len()],
        Weights::Explicit(ws) => {
            if ws.len() != pairs.len() {
                return Err(Error::WeightCountMismatch { expected: pairs.len(), got: ws.len() });
            }
            ws.clone()
        }
    };
    let edges = pairs
        .into_iter()
        .zip(weights)
        .map(|((u, v), w)| Edge { u, v, w })
        .collect();
    WeightedGraph::new(spec.kind.vertex_count(), edges)
}

/// Family recognized up to isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Path(usize),
    Cycle(usize),
    Star(usize),
    PerfectTree { c: usize, h: usize },
    /// One vertex, no edges.
    Single,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recognized {
    pub tag: FamilyTag,
    pub uniform: bool,
}

/// Identifies the family of `g` up to isomorphism.
///
/// Some families overlap: the path on 3 vertices is also the 2-star and
/// `T(2,1)`, and every `k`-star is `T(k,1)`. The canonical tag prefers
/// `Path`, then `Star`, then `PerfectTree`; [`family_memberships`] lists all.
pub fn recognize(g: &WeightedGraph) -> Recognized {
    let tag = family_memberships(g)
        .first()
        .map(|k| match *k {
            FamilyKind::Path(k) => FamilyTag::Path(k),
            FamilyKind::Cycle(k) => FamilyTag::Cycle(k),
            FamilyKind::Star(k) => FamilyTag::Star(k),
            FamilyKind::PerfectTree { c, h } => FamilyTag::PerfectTree { c, h },
        })
        .unwrap_or(if g.vertex_count() == 1 { FamilyTag::Single } else { FamilyTag::General });
    Recognized { tag, uniform: g.has_uniform_weights() }
}

/// Every named family `g` is isomorphic to, in canonical preference order.
pub fn family_memberships(g: &WeightedGraph) -> Vec<FamilyKind> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut out = Vec::new();
    if n < 2 || !g.is_connected() {
        return out;
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    if m == n - 1 && max_deg <= 2 {
        out.push(FamilyKind::Path(n));
    }
    if m == n && n >= 3 && degrees.iter().all(|&d| d == 2) {
        out.push(FamilyKind::Cycle(n));
    }
    let k = n - 1;
    if m == k && k >= 2 && degrees.iter().filter(|&&d| d == k).count() == 1 {
        out.push(FamilyKind::Star(k));
    }
    if m == n - 1 {
        if let Some((c, h)) = perfect_tree_shape(g) {
            out.push(FamilyKind::PerfectTree { c, h });
        }
    }
    out
}

fn perfect_tree_shape(g: &WeightedGraph) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    // A single edge is not a perfect c-ary tree for any c >= 2.
    if n < 3 {
        return None;
    }
    // The root is the unique vertex whose degree equals the branching factor c;
    // every other internal vertex has degree c + 1.
    let roots: Vec<usize> = (0..n)
        .filter(|&v| {
            let d = g.degree(v);
            d >= 2 && g.neighbors(v).iter().all(|&(u, _)| g.degree(u) == 1 || g.degree(u) == d + 1)
        })
        .collect();
    for root in roots {
        let c = g.degree(root);
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut leaf_depth = None;
        let mut ok = true;
        while let Some(v) = queue.pop_front() {
            let children: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| depth[u] == usize::MAX)
                .collect();
            if children.is_empty() {
                match leaf_depth {
                    None => leaf_depth = Some(depth[v]),
                    Some(d) if d != depth[v] => {
                        ok = false;
                        break;
                    }
                    _ => {}
                }
            } else if children.len() != c {
                ok = false;
                break;
            }
            for u in children {
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            }
        }
        if ok {
            if let Some(h) = leaf_depth {
                if tree_size(c, h) == n {
                    return Some((c, h));
                }
            }
        }
    }
    None
}

/// A family of vertex-disjoint single edges and two-edge paths of a graph,
/// plus the uncovered vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverResult {
    /// Single edges `[u, v]` with `u < v`.
    pub p2_blocks: Vec<[usize; 2]>,
    /// Two-edge paths `[a, mid, b]` with `a < b`.
    pub p3_blocks: Vec<[usize; 3]>,
    pub leftover: Vec<usize>,
    pub s: usize,
    pub t: usize,
    /// `(4/3) s + 2 t + |leftover|`
    pub exponent: BigRational,
}

impl CoverResult {
    pub fn is_full(&self) -> bool {
        self.leftover.is_empty()
    }
}

/// Exponent `(4/3) s + 2 t + leftover` of a partial cover, as an exact rational.
pub fn cover_exponent(s: usize, t: usize, leftover: usize) -> BigRational {
    BigRational::new(BigInt::from(4 * s + 6 * t + 3 * leftover), BigInt::from(3))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Piece {
    Leftover(usize),
    P2(usize, usize),
    P3(usize, usize, usize),
}

impl Piece {
    fn vertices(&self) -> Vec<usize> {
        match *self {
            Piece::Leftover(v) => vec![v],
            Piece::P2(a, b) => vec![a, b],
            Piece::P3(a, m, b) => vec![a, m, b],
        }
    }

    fn mask(&self) -> u64 {
        self.vertices().iter().fold(0, |m, &v| m | (1u64 << v))
    }

    // (cost in thirds, t, s)
    fn score(&self) -> (u32, u32, u32) {
        match self {
            Piece::Leftover(_) => (3, 0, 0),
            Piece::P2(..) => (4, 0, 1),
            Piece::P3(..) => (6, 1, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Score {
    cost: u32,
    t: u32,
    s: u32,
}

impl Score {
    fn key(&self) -> (u32, Reverse<u32>, Reverse<u32>) {
        (self.cost, Reverse(self.t), Reverse(self.s))
    }
}

/// Best partial `(s, t)`-cover with the default vertex limit.
pub fn find_best_cover(g: &WeightedGraph) -> Result<CoverResult> {
    find_best_cover_with_limit(g, COVER_LIMIT)
}

/// Minimizes `(4/3) s + 2 t + |leftover|` over all families of vertex-disjoint
/// single edges and two-edge paths of `g`.
///
/// Ties prefer more two-edge paths, then more single edges, then the
/// lexicographically smallest sequence of pieces when pieces are listed by
/// their smallest vertex (a leftover vertex counts as a one-vertex piece).
pub fn find_best_cover_with_limit(g: &WeightedGraph, limit: usize) -> Result<CoverResult> {
    let n = g.vertex_count();
    if n > limit || n > 63 {
        return Err(Error::GraphTooLarge { vertices: n, limit });
    }
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, (Score, Option<Piece>)> = HashMap::new();
    cover_solve(g, 0, full, &mut memo);

    let mut result = CoverResult {
        p2_blocks: Vec::new(),
        p3_blocks: Vec::new(),
        leftover: Vec::new(),
        s: 0,
        t: 0,
        exponent: cover_exponent(0, 0, 0),
    };
    let mut mask = 0u64;
    while mask != full {
        let piece = memo[&mask].1.clone().expect("nonterminal state has a piece");
        mask |= piece.mask();
        match piece {
            Piece::Leftover(v) => result.leftover.push(v),
            Piece::P2(a, b) => result.p2_blocks.push([a, b]),
            Piece::P3(a, m, b) => result.p3_blocks.push([a, m, b]),
        }
    }
    result.s = result.p2_blocks.len();
    result.t = result.p3_blocks.len();
    result.exponent = cover_exponent(result.s, result.t, result.leftover.len());
    Ok(result)
}

fn cover_solve(
    g: &WeightedGraph,
    mask: u64,
    full: u64,
    memo: &mut HashMap<u64, (Score, Option<Piece>)>,
) -> Score {
    if mask == full {
        return Score { cost: 0, t: 0, s: 0 };
    }
    if let Some((score, _)) = memo.get(&mask) {
        return *score;
    }
    let v = (!mask).trailing_zeros() as usize;
    let free = |u: usize| mask & (1u64 << u) == 0;

    let mut options = vec![Piece::Leftover(v)];
    for &(u, _) in g.neighbors(v) {
        if !free(u) {
            continue;
        }
        options.push(Piece::P2(v, u));
        // v as an endpoint: v - u - x
        for &(x, _) in g.neighbors(u) {
            if x != v && free(x) {
                options.push(Piece::P3(v, u, x));
            }
        }
        // v as the middle: u - v - x with u < x
        for &(x, _) in g.neighbors(v) {
            if x > u && free(x) {
                options.push(Piece::P3(u, v, x));
            }
        }
    }

    let mut best: Option<(Score, Piece)> = None;
    for piece in options {
        let rest = cover_solve(g, mask | piece.mask(), full, memo);
        let (c, t, s) = piece.score();
        let score = Score { cost: rest.cost + c, t: rest.t + t, s: rest.s + s };
        let better = match &best {
            None => true,
            Some((b, bp)) => match score.key().cmp(&b.key()) {
                Ordering::Less => true,
                Ordering::Equal => piece.vertices() < bp.vertices(),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((score, piece));
        }
    }
    let (score, piece) = best.expect("leftover option always exists");
    memo.insert(mask, (score, Some(piece)));
    score
}

/// A maximum-cardinality matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingResult {
    /// Indices into [`WeightedGraph::edges`].
    pub edges: Vec<usize>,
    pub m: usize,
    /// Unmatched vertex count, `vertex_count - 2m`.
    pub r: usize,
}

pub fn max_matching(g: &WeightedGraph) -> Result<MatchingResult> {
    max_matching_with_limit(g, MATCHING_LIMIT)
}

/// Exhaustive maximum matching: memoized search on the lowest unmatched vertex.
pub fn max_matching_with_limit(g: &WeightedGraph, limit: usize) -> Result<MatchingResult> {
    let n = g.vertex_count();
    if n > limit || n > 63 {
        return Err(Error::GraphTooLarge { vertices: n, limit });
    }
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, (usize, Option<(usize, usize)>)> = HashMap::new();
    matching_solve(g, 0, full, &mut memo);

    let mut edges = Vec::new();
    let mut mask = 0u64;
    while mask != full {
        let v = (!mask).trailing_zeros() as usize;
        match memo[&mask].1 {
            Some((u, e)) => {
                edges.push(e);
                mask |= (1u64 << v) | (1u64 << u);
            }
            None => mask |= 1u64 << v,
        }
    }
    edges.sort_unstable();
    let m = edges.len();
    Ok(MatchingResult { edges, m, r: n - 2 * m })
}

/// Best size below each matched-vertex mask, with the chosen pair.
type MatchMemo = HashMap<u64, (usize, Option<(usize, usize)>)>;

fn matching_solve(
    g: &WeightedGraph,
    mask: u64,
    full: u64,
    memo: &mut MatchMemo,
) -> usize {
    if mask == full {
        return 0;
    }
    if let Some(&(m, _)) = memo.get(&mask) {
        return m;
    }
    let v = (!mask).trailing_zeros() as usize;
    let mut best = matching_solve(g, mask | (1u64 << v), full, memo);
    let mut choice = None;
    // Upper bound: every remaining vertex matched.
    let remaining = (full & !mask).count_ones() as usize / 2;
    for &(u, e) in g.neighbors(v) {
        if best == remaining {
            break;
        }
        if mask & (1u64 << u) != 0 {
            continue;
        }
        let m = 1 + matching_solve(g, mask | (1u64 << v) | (1u64 << u), full, memo);
        if m > best {
            best = m;
            choice = Some((u, e));
        }
    }
    memo.insert(mask, (best, choice));
    best
}
