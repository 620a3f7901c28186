//! Exact configuration counting.
//!
//! Two independent routes:
//!
//! * [`count_bruteforce`] unfolds the definition: it tries every assignment of
//!   template vertices to points (pruning as soon as an edge between assigned
//!   vertices fails) and supports both injective and homomorphism semantics.
//! * [`count_fast`] counts homomorphisms. It fixes a minimum feedback vertex
//!   set of the template, enumerates its assignments, and counts the remaining
//!   forest by dynamic programming over per-point candidate tables. Injective
//!   counts are recovered from homomorphism counts of vertex quotients by
//!   inclusion-exclusion over set partitions. Vertices
//!   pinned by two assigned neighbours in the plane are located geometrically
//!   (circle intersections, alpha-line intersections) and looked up in a point
//!   grid; everything else goes through a sorted index of pair values.
//!
//! Counts are labelled: an assignment and its image under a template
//! automorphism are counted separately.

use crate::constructions::PointSet;
use crate::error::{Error, Result};
use crate::geometry::{
    circle_circle, classify_alpha_lines, metric, CircleIntersection, Dim, LinePairClass, Mode, Point,
    Tolerance,
};
use crate::graphs::WeightedGraph;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

/// Default work budget shared by both counters.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
/// Templates up to this size get an exhaustive minimum feedback vertex set.
pub const FVS_EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Assigned points must be pairwise distinct.
    Injective,
    /// Any assignment satisfying every edge.
    Homomorphism,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Injective => f.write_str("injective"),
            Semantics::Homomorphism => f.write_str("hom"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Auto,
    BruteForce,
    FastDp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Auto => f.write_str("auto"),
            Method::BruteForce => f.write_str("bruteforce"),
            Method::FastDp => f.write_str("fastdp"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountQuery {
    pub mode: Mode,
    pub semantics: Semantics,
    pub tol: Tolerance,
    pub method: Method,
    /// Maximum number of elementary steps (edge checks, table updates).
    pub budget: u64,
}

impl CountQuery {
    pub fn new(mode: Mode, semantics: Semantics) -> CountQuery {
        CountQuery {
            mode,
            semantics,
            tol: Tolerance::default(),
            method: Method::Auto,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_method(mut self, method: Method) -> CountQuery {
        self.method = method;
        self
    }

    pub fn with_tol(mut self, tol: Tolerance) -> CountQuery {
        self.tol = tol;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> CountQuery {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigUint,
    pub method_used: Method,
    pub nodes_explored: u64,
    pub fvs_size: usize,
}

fn validate(points: &PointSet, graph: &WeightedGraph, q: &CountQuery) -> Result<()> {
    if let Some(p) = points.points().iter().find(|p| p.dim() != points.dim()) {
        return Err(Error::DimensionMismatch { expected: points.dim().get(), got: p.dim().get() });
    }
    if q.mode == Mode::DotProduct && graph.edges().iter().any(|e| e.w == 0.0) {
        return Err(Error::ZeroWeightInDotMode);
    }
    Ok(())
}

/// Counts with the method requested in `q`. `Auto` uses the fast counter
/// except for injective counts of templates above [`MOBIUS_LIMIT`] vertices.
pub fn count(points: &PointSet, graph: &WeightedGraph, q: &CountQuery) -> Result<CountResult> {
    match (q.method, q.semantics) {
        (Method::BruteForce, _) => count_bruteforce(points, graph, q),
        (Method::Auto, Semantics::Injective) if graph.vertex_count() > MOBIUS_LIMIT => {
            count_bruteforce(points, graph, q)
        }
        _ => count_fast(points, graph, q),
    }
}

/// Direct enumeration of vertex-to-point assignments.
pub fn count_bruteforce(points: &PointSet, graph: &WeightedGraph, q: &CountQuery) -> Result<CountResult> {
    validate(points, graph, q)?;
    let k = graph.vertex_count();
    let order = search_order(graph);
    let mut rank = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // For each position in `order`, the earlier neighbours and edge weights.
    let back: Vec<Vec<(usize, f64)>> = order
        .iter()
        .map(|&v| {
            graph
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| rank[u] < rank[v])
                .map(|&(u, e)| (u, graph.edges()[e].w))
                .collect()
        })
        .collect();

    struct Search<'a> {
        pts: &'a [Point],
        order: &'a [usize],
        back: &'a [Vec<(usize, f64)>],
        assign: Vec<usize>,
        used: Vec<bool>,
        injective: bool,
        mode: Mode,
        tol: Tolerance,
        work: u64,
        budget: u64,
        found: u64,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> Result<()> {
            if depth == self.order.len() {
                self.found += 1;
                return Ok(());
            }
            let v = self.order[depth];
            for x in 0..self.pts.len() {
                self.work += 1;
                if self.injective && self.used[x] {
                    continue;
                }
                let mut ok = true;
                for &(u, w) in &self.back[depth] {
                    self.work += 1;
                    if !self.tol.close(metric(&self.pts[x], &self.pts[self.assign[u]], self.mode), w) {
                        ok = false;
                        break;
                    }
                }
                if self.work > self.budget {
                    return Err(Error::BudgetExceeded { budget: self.budget });
                }
                if !ok {
                    continue;
                }
                self.assign[v] = x;
                self.used[x] = true;
                self.run(depth + 1)?;
                self.used[x] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        pts: points.points(),
        order: &order,
        back: &back,
        assign: vec![usize::MAX; k],
        used: vec![false; points.len()],
        injective: q.semantics == Semantics::Injective,
        mode: q.mode,
        tol: q.tol,
        work: 0,
        budget: q.budget,
        found: 0,
    };
    search.run(0)?;
    Ok(CountResult {
        count: BigUint::from(search.found),
        method_used: Method::BruteForce,
        nodes_explored: search.work,
        fvs_size: 0,
    })
}

/// Breadth-first order so that every vertex after the first of its component
/// has an earlier neighbour.
fn search_order(graph: &WeightedGraph) -> Vec<usize> {
    let k = graph.vertex_count();
    let mut seen = vec![false; k];
    let mut order = Vec::with_capacity(k);
    let mut starts: Vec<usize> = (0..k).collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(u, _) in graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
        }
    }
    order
}

/// All unordered point pairs sorted by their metric value.
///
/// Lookups scan the sorted range around the target and keep exactly the pairs
/// whose value is within tolerance, so there are no false negatives.
#[derive(Clone, Debug)]
pub struct ValueIndex {
    mode: Mode,
    // (value, i, j) with i <= j; self-pairs only in dot mode
    pairs: Vec<(f64, u32, u32)>,
}

impl ValueIndex {
    pub fn build(points: &PointSet, mode: Mode) -> ValueIndex {
        let pts = points.points();
        let n = pts.len();
        let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            let first = if mode == Mode::DotProduct { i } else { i + 1 };
            for j in first..n {
                pairs.push((metric(&pts[i], &pts[j], mode), i as u32, j as u32));
            }
        }
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        ValueIndex { mode, pairs }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Unordered pairs `(i, j)`, `i <= j`, whose value is within tolerance of `w`.
    pub fn lookup(&self, w: f64, tol: Tolerance) -> impl Iterator<Item = (usize, usize)> + '_ {
        let b = tol.bound(w);
        // Widened window; the exact test below decides membership.
        let lo = self.pairs.partition_point(|p| p.0 < w - 2.0 * b);
        let hi = self.pairs.partition_point(|p| p.0 <= w + 2.0 * b);
        self.pairs[lo..hi]
            .iter()
            .filter(move |p| tol.close(p.0, w))
            .map(|p| (p.1 as usize, p.2 as usize))
    }
}

/// Compressed adjacency: for each point, the points realizing one weight.
#[derive(Clone, Debug)]
struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    fn from_pairs(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Adjacency {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, j) in pairs {
            lists[i].push(j as u32);
            if i != j {
                lists[j].push(i as u32);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut l in lists {
            l.sort_unstable();
            targets.extend(l);
            offsets.push(targets.len() as u32);
        }
        Adjacency { offsets, targets }
    }

    fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// Uniform hash grid over the points for "which points are near here" queries.
#[derive(Clone, Debug)]
struct PointGrid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl PointGrid {
    fn build(points: &PointSet) -> PointGrid {
        let cell = 1e-6 * points.scale();
        let mut cells: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        for (i, p) in points.points().iter().enumerate() {
            cells.entry(Self::key(cell, p)).or_default().push(i as u32);
        }
        PointGrid { cell, cells }
    }

    fn key(cell: f64, p: &Point) -> [i64; 3] {
        [
            (p.x() / cell).floor() as i64,
            (p.y() / cell).floor() as i64,
            (p.z() / cell).floor() as i64,
        ]
    }

    /// Points within `radius` of `center`; `None` when the radius exceeds a cell.
    fn near(&self, center: &Point, radius: f64, pts: &[Point], out: &mut Vec<u32>) -> Option<()> {
        if radius.is_nan() || radius > self.cell || !center.is_finite() {
            return None;
        }
        let k = Self::key(self.cell, center);
        let dz: &[i64] = if center.dim() == Dim::Three { &[-1, 0, 1] } else { &[0] };
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &z in dz {
                    if let Some(list) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + z]) {
                        out.extend(list.iter().copied().filter(|&i| pts[i as usize].dist(center) <= radius));
                    }
                }
            }
        }
        Some(())
    }
}

/// A constraint "the vertex sits at weight class `wc` from point `p`".
type Constraint = (usize, usize);

/// Precomputed lookup structures for counting one template in one point set.
pub struct Counter<'a> {
    points: &'a PointSet,
    graph: &'a WeightedGraph,
    query: CountQuery,
    weights: Vec<f64>,
    edge_class: Vec<usize>,
    adjacency: Vec<Adjacency>,
    grid: PointGrid,
}

impl<'a> Counter<'a> {
    pub fn new(points: &'a PointSet, graph: &'a WeightedGraph, query: CountQuery) -> Result<Counter<'a>> {
        validate(points, graph, &query)?;
        let mut weights: Vec<f64> = Vec::new();
        let mut edge_class = Vec::with_capacity(graph.edge_count());
        for e in graph.edges() {
            let idx = match weights.iter().position(|w| w.to_bits() == e.w.to_bits()) {
                Some(i) => i,
                None => {
                    weights.push(e.w);
                    weights.len() - 1
                }
            };
            edge_class.push(idx);
        }
        let index = ValueIndex::build(points, query.mode);
        let adjacency = weights
            .iter()
            .map(|&w| Adjacency::from_pairs(points.len(), index.lookup(w, query.tol)))
            .collect();
        Ok(Counter {
            points,
            graph,
            query,
            weights,
            edge_class,
            adjacency,
            grid: PointGrid::build(points),
        })
    }

    fn satisfies(&self, x: usize, (p, wc): Constraint) -> bool {
        let pts = self.points.points();
        self.query.tol.close(metric(&pts[x], &pts[p], self.query.mode), self.weights[wc])
    }

    /// Points of the set satisfying every constraint from `v`'s assigned
    /// neighbours in `assigned` (indexed by template vertex). Ascending order.
    pub fn candidates(&self, assigned: &[Option<usize>], v: usize) -> Vec<usize> {
        let cons: Vec<Constraint> = self
            .graph
            .neighbors(v)
            .iter()
            .filter_map(|&(u, e)| assigned.get(u).copied().flatten().map(|p| (p, self.edge_class[e])))
            .collect();
        self.candidates_for(&cons).into_iter().map(|i| i as usize).collect()
    }

    fn candidates_for(&self, cons: &[Constraint]) -> Vec<u32> {
        match cons.len() {
            0 => (0..self.points.len() as u32).collect(),
            1 => self.adjacency[cons[0].1].neighbors(cons[0].0).to_vec(),
            _ => {
                if let Some(mut found) = self.geometric(cons) {
                    found.retain(|&x| cons.iter().all(|&c| self.satisfies(x as usize, c)));
                    found.sort_unstable();
                    found.dedup();
                    return found;
                }
                let (best, rest) = {
                    let i = (0..cons.len())
                        .min_by_key(|&i| self.adjacency[cons[i].1].neighbors(cons[i].0).len())
                        .unwrap();
                    let rest: Vec<Constraint> =
                        cons.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
                    (cons[i], rest)
                };
                self.adjacency[best.1]
                    .neighbors(best.0)
                    .iter()
                    .copied()
                    .filter(|&x| rest.iter().all(|&c| self.satisfies(x as usize, c)))
                    .collect()
            }
        }
    }

    /// Locates candidates pinned by two planar constraints. Returns `None`
    /// whenever the configuration is degenerate or ill-conditioned, in which
    /// case the caller falls back to the value index.
    fn geometric(&self, cons: &[Constraint]) -> Option<Vec<u32>> {
        if self.points.dim() != Dim::Two {
            return None;
        }
        let pts = self.points.points();
        let tol = self.query.tol;
        let (p1, w1) = (pts[cons[0].0], self.weights[cons[0].1]);
        let (p2, w2) = (pts[cons[1].0], self.weights[cons[1].1]);
        let t1 = tol.bound(w1);
        let t2 = tol.bound(w2);
        let slack = 4.0 * tol.eps() * self.points.scale();
        let mut out = Vec::new();
        match self.query.mode {
            Mode::Distance => {
                if !(w1 > 0.0 && w2 > 0.0) {
                    return Some(Vec::new());
                }
                let d = p1.dist(&p2);
                match circle_circle(&p1, w1, &p2, w2, tol).ok()? {
                    CircleIntersection::Points(xs) if xs.len() == 2 => {
                        let h = xs[0].dist(&xs[1]) / 2.0;
                        // sine of the crossing angle of the two circles
                        let sin = d * h / (w1 * w2);
                        if sin < 1e-3 {
                            return None;
                        }
                        let radius = 4.0 * (t1 + t2) / sin + slack;
                        if radius > 1e-3 * w1.min(w2) {
                            return None;
                        }
                        for x in &xs {
                            self.grid.near(x, radius, pts, &mut out)?;
                        }
                        Some(out)
                    }
                    // Far apart or concentric with different radii: a point
                    // satisfying both within tolerance would still be near-tangent,
                    // so only certify emptiness when the gap is large.
                    CircleIntersection::Empty => {
                        let gap = (d - (w1 + w2)).max((w1 - w2).abs() - d);
                        if gap > 4.0 * (t1 + t2) + slack {
                            Some(Vec::new())
                        } else {
                            None
                        }
                    }
                    _ => None,
                }
            }
            Mode::DotProduct => match classify_alpha_lines(&p1, w1, &p2, w2, tol).ok()? {
                LinePairClass::UniquePoint(q) => {
                    let det = (p1.x() * p2.y() - p1.y() * p2.x()).abs();
                    let frob = (p1.dot(&p1) + p2.dot(&p2)).sqrt();
                    let radius = 4.0 * (t1 + t2) * frob / det + slack;
                    self.grid.near(&q, radius, pts, &mut out)?;
                    Some(out)
                }
                _ => None,
            },
        }
    }
}

/// Template being counted: the input graph or one of its vertex quotients.
/// Parallel edges are grouped per neighbour; self-loops become unary
/// constraints `metric(x, x) = w`.
#[derive(Clone, Debug)]
struct Template {
    nbrs: Vec<Vec<(usize, Vec<usize>)>>,
    loops: Vec<Vec<usize>>,
}

impl Template {
    fn from_graph(graph: &WeightedGraph, edge_class: &[usize]) -> Template {
        let blocks: Vec<usize> = (0..graph.vertex_count()).collect();
        Template::quotient(graph, edge_class, &blocks, graph.vertex_count())
    }

    fn quotient(graph: &WeightedGraph, edge_class: &[usize], block: &[usize], count: usize) -> Template {
        let mut nbrs: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); count];
        let mut loops: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (i, e) in graph.edges().iter().enumerate() {
            let (a, b, wc) = (block[e.u], block[e.v], edge_class[i]);
            if a == b {
                if !loops[a].contains(&wc) {
                    loops[a].push(wc);
                }
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                match nbrs[x].iter_mut().find(|(z, _)| *z == y) {
                    Some((_, classes)) => {
                        if !classes.contains(&wc) {
                            classes.push(wc);
                        }
                    }
                    None => nbrs[x].push((y, vec![wc])),
                }
            }
        }
        Template { nbrs, loops }
    }

    fn len(&self) -> usize {
        self.nbrs.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    fn simple_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.nbrs.iter().enumerate() {
            for &(v, _) in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Count plan: feedback vertex set order plus the rooted forest left over.
struct Plan {
    fvs: Vec<usize>,
    // constraints of each F vertex on earlier F vertices: (F position, weight class)
    fvs_back: Vec<Vec<(usize, usize)>>,
    // forest vertices in post-order, per component
    components: Vec<Vec<usize>>,
    anchored: Vec<bool>,
    children: Vec<Vec<(usize, Vec<usize>)>>,
    // forest vertex -> (F position, weight class)
    anchors: Vec<Vec<(usize, usize)>>,
    loops: Vec<Vec<usize>>,
}

impl Plan {
    fn new(t: &Template) -> Plan {
        let k = t.len();
        let degrees: Vec<usize> = (0..k).map(|v| t.degree(v)).collect();
        let fvs_set = fvs_of(k, &t.simple_edges(), &degrees);
        let mut in_f = vec![false; k];
        for &v in &fvs_set {
            in_f[v] = true;
        }
        // Enumeration order: each next F vertex has the most edges to those already chosen.
        let mut fvs: Vec<usize> = Vec::new();
        let mut remaining = fvs_set.clone();
        while !remaining.is_empty() {
            let (i, _) = remaining
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| {
                    let linked = t.nbrs[v].iter().filter(|(u, _)| fvs.contains(u)).count();
                    (linked, t.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            fvs.push(remaining.remove(i));
        }
        let mut fpos = vec![usize::MAX; k];
        for (i, &v) in fvs.iter().enumerate() {
            fpos[v] = i;
        }
        let fvs_back = fvs
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                t.nbrs[v]
                    .iter()
                    .filter(|(u, _)| in_f[*u] && fpos[*u] < i)
                    .flat_map(|(u, classes)| {
                        let p = fpos[*u];
                        classes.iter().map(move |&wc| (p, wc))
                    })
                    .collect()
            })
            .collect();

        let mut anchors = vec![Vec::new(); k];
        let mut children = vec![Vec::new(); k];
        let mut components = Vec::new();
        let mut anchored = Vec::new();
        let mut seen = in_f.clone();
        for root in 0..k {
            if seen[root] {
                continue;
            }
            // Iterative DFS producing a post-order.
            let mut order = Vec::new();
            let mut stack = vec![(root, usize::MAX)];
            seen[root] = true;
            while let Some((v, parent)) = stack.pop() {
                order.push(v);
                for (u, classes) in &t.nbrs[v] {
                    let u = *u;
                    if in_f[u] {
                        anchors[v].extend(classes.iter().map(|&wc| (fpos[u], wc)));
                    } else if u != parent && !seen[u] {
                        seen[u] = true;
                        children[v].push((u, classes.clone()));
                        stack.push((u, v));
                    }
                }
            }
            order.reverse();
            anchored.push(order.iter().any(|&v| !anchors[v].is_empty()));
            components.push(order);
        }
        Plan { fvs, fvs_back, components, anchored, children, anchors, loops: t.loops.clone() }
    }
}

/// Minimum feedback vertex set: exhaustive for small templates, preferring
/// the largest total degree among minimum sets; greedy beyond
/// [`FVS_EXHAUSTIVE_LIMIT`] vertices.
pub fn min_feedback_vertex_set(graph: &WeightedGraph) -> Vec<usize> {
    let edges: Vec<(usize, usize)> = graph.edges().iter().map(|e| (e.u, e.v)).collect();
    let degrees: Vec<usize> = (0..graph.vertex_count()).map(|v| graph.degree(v)).collect();
    fvs_of(graph.vertex_count(), &edges, &degrees)
}

fn fvs_of(k: usize, edges: &[(usize, usize)], degrees: &[usize]) -> Vec<usize> {
    if is_forest_without(k, edges, &vec![false; k]) {
        return Vec::new();
    }
    if k > FVS_EXHAUSTIVE_LIMIT {
        return greedy_fvs(k, edges);
    }
    for size in 1..=k {
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut chosen = Vec::with_capacity(size);
        combinations(k, size, 0, &mut chosen, &mut |set| {
            let mut removed = vec![false; k];
            for &v in set {
                removed[v] = true;
            }
            if is_forest_without(k, edges, &removed) {
                let deg: usize = set.iter().map(|&v| degrees[v]).sum();
                if best.as_ref().is_none_or(|(b, _)| deg > *b) {
                    best = Some((deg, set.to_vec()));
                }
            }
        });
        if let Some((_, set)) = best {
            return set;
        }
    }
    unreachable!("removing every vertex leaves a forest")
}

fn combinations(k: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    for v in start..k {
        if k - v < size - chosen.len() {
            break;
        }
        chosen.push(v);
        combinations(k, size, v + 1, chosen, f);
        chosen.pop();
    }
}

fn is_forest_without(k: usize, edges: &[(usize, usize)], removed: &[bool]) -> bool {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        if removed[u] || removed[v] {
            continue;
        }
        let a = find(&mut parent, u);
        let b = find(&mut parent, v);
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn greedy_fvs(k: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); k];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut removed = vec![false; k];
    let mut out = Vec::new();
    loop {
        // Peel vertices of degree <= 1; what remains lies on or between cycles.
        let mut alive = removed.iter().map(|r| !r).collect::<Vec<_>>();
        loop {
            let mut changed = false;
            for v in 0..k {
                if alive[v] && adj[v].iter().filter(|&&u| alive[u]).count() <= 1 {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let pick = (0..k)
            .filter(|&v| alive[v])
            .max_by_key(|&v| (adj[v].iter().filter(|&&u| alive[u]).count(), std::cmp::Reverse(v)));
        match pick {
            None => break,
            Some(v) => {
                removed[v] = true;
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Per-thread scratch space for the forest dynamic program.
struct Worker<'c, 'a> {
    counter: &'c Counter<'a>,
    plan: &'c Plan,
    fassign: Vec<usize>,
    tables: Vec<Vec<BigUint>>,
    active: Vec<Vec<u32>>,
    work: u64,
    shared_work: &'c AtomicU64,
    budget: u64,
}

impl<'c, 'a> Worker<'c, 'a> {
    fn new(counter: &'c Counter<'a>, plan: &'c Plan, shared_work: &'c AtomicU64) -> Self {
        let k = plan.loops.len();
        Worker {
            counter,
            plan,
            fassign: vec![usize::MAX; plan.fvs.len()],
            tables: vec![Vec::new(); k],
            active: vec![Vec::new(); k],
            work: 0,
            shared_work,
            budget: counter.query.budget,
        }
    }

    fn tick(&mut self, n: u64) -> Result<()> {
        self.work += n;
        if self.work >= 4096 {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.shared_work.fetch_add(self.work, Ordering::Relaxed) + self.work;
        self.work = 0;
        if total > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn domain(&self, v: usize, cons: &[Constraint]) -> Vec<u32> {
        let mut dom = self.counter.candidates_for(cons);
        if !self.plan.loops[v].is_empty() {
            dom.retain(|&x| self.plan.loops[v].iter().all(|&wc| self.counter.satisfies(x as usize, (x as usize, wc))));
        }
        dom
    }

    /// Sum over assignments of F positions `depth..`, given positions `..depth`.
    fn enumerate(&mut self, depth: usize, fixed: &BigUint) -> Result<BigUint> {
        if depth == self.plan.fvs.len() {
            let mut total = fixed.clone();
            for c in 0..self.plan.components.len() {
                if !self.plan.anchored[c] {
                    continue;
                }
                if total.is_zero() {
                    break;
                }
                total *= self.component(c)?;
            }
            return Ok(total);
        }
        let cons: Vec<Constraint> =
            self.plan.fvs_back[depth].iter().map(|&(pos, wc)| (self.fassign[pos], wc)).collect();
        let cands = self.domain(self.plan.fvs[depth], &cons);
        let mut sum = BigUint::zero();
        for x in cands {
            self.tick(1)?;
            self.fassign[depth] = x as usize;
            sum += self.enumerate(depth + 1, fixed)?;
        }
        Ok(sum)
    }

    /// Number of ways to place one forest component given the F assignment.
    fn component(&mut self, c: usize) -> Result<BigUint> {
        let n = self.counter.points.len();
        let plan = self.plan;
        let order = &plan.components[c];
        for &v in order {
            let cons: Vec<Constraint> =
                plan.anchors[v].iter().map(|&(pos, wc)| (self.fassign[pos], wc)).collect();
            let dom = self.domain(v, &cons);
            self.tick(dom.len() as u64 + 1)?;
            if self.tables[v].len() != n {
                self.tables[v] = vec![BigUint::zero(); n];
            }
            let mut values: Vec<(u32, BigUint)> = Vec::with_capacity(dom.len());
            for &x in &dom {
                let mut prod = BigUint::one();
                for (u, classes) in &plan.children[v] {
                    let nbrs = self.counter.adjacency[classes[0]].neighbors(x as usize);
                    self.work += nbrs.len() as u64;
                    let mut s = BigUint::zero();
                    let tu = &self.tables[*u];
                    for &y in nbrs {
                        let val = &tu[y as usize];
                        if !val.is_zero()
                            && classes[1..].iter().all(|&wc| self.counter.satisfies(y as usize, (x as usize, wc)))
                        {
                            s += val;
                        }
                    }
                    if s.is_zero() {
                        prod.set_zero();
                        break;
                    }
                    prod *= s;
                }
                if !prod.is_zero() {
                    values.push((x, prod));
                }
            }
            self.tick(0)?;
            // Children tables are no longer needed.
            for (u, _) in &plan.children[v] {
                let act = std::mem::take(&mut self.active[*u]);
                for y in &act {
                    self.tables[*u][*y as usize].set_zero();
                }
            }
            let mut act = Vec::with_capacity(values.len());
            for (x, val) in values {
                self.tables[v][x as usize] = val;
                act.push(x);
            }
            self.active[v] = act;
        }
        let root = *order.last().expect("components are nonempty");
        let act = std::mem::take(&mut self.active[root]);
        let mut total = BigUint::zero();
        for x in act {
            total += std::mem::take(&mut self.tables[root][x as usize]);
        }
        Ok(total)
    }
}

/// Homomorphism count of one template; returns the count and the FVS size.
fn count_template(counter: &Counter<'_>, t: &Template, shared: &AtomicU64) -> Result<(BigUint, usize)> {
    let plan = Plan::new(t);

    // Components untouched by F are counted once.
    let mut fixed = BigUint::one();
    {
        let mut w = Worker::new(counter, &plan, shared);
        for c in 0..plan.components.len() {
            if !plan.anchored[c] {
                fixed *= w.component(c)?;
            }
        }
        w.flush()?;
    }

    if plan.fvs.is_empty() || fixed.is_zero() {
        return Ok((fixed, plan.fvs.len()));
    }
    let first = Worker::new(counter, &plan, shared).domain(plan.fvs[0], &[]);
    let chunk = (first.len() / (4 * rayon::current_num_threads()).max(1)).max(1);
    let parts: Vec<Result<BigUint>> = first
        .par_chunks(chunk)
        .map(|xs| {
            let mut w = Worker::new(counter, &plan, shared);
            let mut sum = BigUint::zero();
            for &x in xs {
                w.tick(1)?;
                w.fassign[0] = x as usize;
                sum += w.enumerate(1, &fixed)?;
            }
            w.flush()?;
            Ok(sum)
        })
        .collect();
    let mut total = BigUint::zero();
    for p in parts {
        total += p?;
    }
    Ok((total, plan.fvs.len()))
}

/// Largest template for which injective counts go through partition inversion.
pub const MOBIUS_LIMIT: usize = 8;

/// Injective count as `sum over partitions p of V: mu(p) * hom(G / p)`, where
/// `mu(p) = prod over blocks B of (-1)^(|B|-1) (|B|-1)!`.
fn count_injective_mobius(counter: &Counter<'_>, graph: &WeightedGraph, shared: &AtomicU64) -> Result<BigUint> {
    let k = graph.vertex_count();
    // In distance mode a block holding both ends of an edge forces a zero
    // distance against a nonzero weight, so such partitions contribute nothing.
    let prune = counter.query.mode == Mode::Distance;
    let mut block = vec![0usize; k];
    let mut sizes: Vec<usize> = Vec::new();
    let mut total = BigInt::zero();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        graph: &WeightedGraph,
        counter: &Counter<'_>,
        prune: bool,
        block: &mut Vec<usize>,
        sizes: &mut Vec<usize>,
        total: &mut BigInt,
        shared: &AtomicU64,
    ) -> Result<()> {
        if v == graph.vertex_count() {
            let t = Template::quotient(graph, &counter.edge_class, block, sizes.len());
            let (hom, _) = count_template(counter, &t, shared)?;
            let mut mu = BigInt::one();
            for &s in sizes.iter() {
                for f in 2..s {
                    mu *= f;
                }
                if s % 2 == 0 {
                    mu = -mu;
                }
            }
            *total += mu * BigInt::from(hom);
            return Ok(());
        }
        for b in 0..=sizes.len() {
            if prune && graph.neighbors(v).iter().any(|&(u, _)| u < v && block[u] == b) {
                continue;
            }
            block[v] = b;
            if b == sizes.len() {
                sizes.push(1);
                rec(v + 1, graph, counter, prune, block, sizes, total, shared)?;
                sizes.pop();
            } else {
                sizes[b] += 1;
                rec(v + 1, graph, counter, prune, block, sizes, total, shared)?;
                sizes[b] -= 1;
            }
        }
        Ok(())
    }

    rec(0, graph, counter, prune, &mut block, &mut sizes, &mut total, shared)?;
    total.to_biguint().ok_or_else(|| Error::InvalidParams("negative injective count".into()))
}

/// Exact count via feedback vertex set enumeration and forest DP.
///
/// Injective counts use inclusion-exclusion over vertex partitions for
/// templates with at most [`MOBIUS_LIMIT`] vertices; larger templates fall
/// back to [`count_bruteforce`] and fail with `UnsupportedSemantics` when
/// that exceeds the budget.
pub fn count_fast(points: &PointSet, graph: &WeightedGraph, q: &CountQuery) -> Result<CountResult> {
    validate(points, graph, q)?;
    if q.semantics == Semantics::Injective && graph.vertex_count() > MOBIUS_LIMIT {
        return count_bruteforce(points, graph, q).map_err(|e| match e {
            Error::BudgetExceeded { budget } => Error::UnsupportedSemantics(format!(
                "injective counting of templates with more than {MOBIUS_LIMIT} vertices is brute force only \
                 and exceeded the budget of {budget}"
            )),
            other => other,
        });
    }
    let counter = Counter::new(points, graph, *q)?;
    let shared = AtomicU64::new(0);
    let own = Template::from_graph(graph, &counter.edge_class);
    let (count, fvs_size) = match q.semantics {
        Semantics::Homomorphism => count_template(&counter, &own, &shared)?,
        Semantics::Injective => {
            let fvs = Plan::new(&own).fvs.len();
            (count_injective_mobius(&counter, graph, &shared)?, fvs)
        }
    };
    Ok(CountResult { count, method_used: Method::FastDp, nodes_explored: shared.load(Ordering::Relaxed), fvs_size })
}

/// Candidate points for `v` given a partial assignment (template vertex to
/// point index), using the same machinery as [`count_fast`].
pub fn candidates(
    points: &PointSet,
    graph: &WeightedGraph,
    q: &CountQuery,
    assigned: &[Option<usize>],
    v: usize,
) -> Result<Vec<usize>> {
    Ok(Counter::new(points, graph, *q)?.candidates(assigned, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_family, FamilyKind, FamilySpec};

    fn set2(pts: &[(f64, f64)]) -> PointSet {
        PointSet::new(Dim::Two, pts.iter().map(|&(x, y)| Point::new2(x, y)).collect()).unwrap()
    }

    fn hom(mode: Mode) -> CountQuery {
        CountQuery::new(mode, Semantics::Homomorphism)
    }

    #[test]
    fn bruteforce_examples() {
        let e = set2(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let p2 = WeightedGraph::from_triples(2, &[(0, 1, 1.0)]).unwrap();
        let q = CountQuery::new(Mode::Distance, Semantics::Injective);
        assert_eq!(count_bruteforce(&e, &p2, &q).unwrap().count, BigUint::from(4u32));

        let square = set2(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let c4 = make_family(&FamilySpec::uniform(FamilyKind::Cycle(4), 1.0)).unwrap();
        assert_eq!(count_bruteforce(&square, &c4, &q).unwrap().count, BigUint::from(8u32));
    }

    #[test]
    fn single_vertex_counts_points() {
        let e = set2(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (5.0, 5.0)]);
        let g = WeightedGraph::new(1, vec![]).unwrap();
        assert_eq!(count_fast(&e, &g, &hom(Mode::Distance)).unwrap().count, BigUint::from(4u32));
        assert_eq!(count_bruteforce(&e, &g, &hom(Mode::Distance)).unwrap().count, BigUint::from(4u32));
    }

    #[test]
    fn budget_is_enforced() {
        let e = set2(&(0..30).map(|i| (i as f64, 0.0)).collect::<Vec<_>>());
        let g = WeightedGraph::new(4, vec![]).unwrap();
        let q = hom(Mode::Distance).with_budget(1000);
        assert!(matches!(count_bruteforce(&e, &g, &q), Err(Error::BudgetExceeded { .. })));
        let q = CountQuery::new(Mode::Distance, Semantics::Injective);
        assert_eq!(count_fast(&e, &g, &q).unwrap().count, BigUint::from(30u32 * 29 * 28 * 27));
        let big = WeightedGraph::new(MOBIUS_LIMIT + 1, vec![]).unwrap();
        assert!(matches!(count_fast(&e, &big, &q), Err(Error::UnsupportedSemantics(_))));
    }

    #[test]
    fn candidate_examples() {
        let e = set2(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 0.5), (3.0, 5.0), (2.0, 7.0), (2.0, -1.0), (1.0, 0.0 + 1e-3)]);
        let hinge = WeightedGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let c = candidates(&e, &hinge, &hom(Mode::Distance), &[Some(0), None, Some(1)], 1).unwrap();
        assert_eq!(c, vec![2]);

        let dot = WeightedGraph::from_triples(3, &[(0, 1, 3.0), (1, 2, 5.0)]).unwrap();
        let e2 = set2(&[(1.0, 0.0), (0.0, 1.0), (3.0, 5.0), (3.0, 4.0)]);
        let c = candidates(&e2, &dot, &hom(Mode::DotProduct), &[Some(0), None, Some(1)], 1).unwrap();
        assert_eq!(c, vec![2]);

        let fiber = WeightedGraph::from_triples(3, &[(0, 1, 2.0), (1, 2, 4.0)]).unwrap();
        let e3 = set2(&[(1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (2.0, -3.0), (1.0, 1.0)]);
        let c = candidates(&e3, &fiber, &hom(Mode::DotProduct), &[Some(0), None, Some(1)], 1).unwrap();
        assert_eq!(c, vec![1, 2, 3]);
    }

    #[test]
    fn value_index_lookup() {
        let e = set2(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let idx = ValueIndex::build(&e, Mode::Distance);
        assert_eq!(idx.len(), 3);
        let mut hits: Vec<_> = idx.lookup(1.0, Tolerance::default()).collect();
        hits.sort();
        assert_eq!(hits, vec![(0, 1), (1, 2)]);
        let dot = ValueIndex::build(&e, Mode::DotProduct);
        assert_eq!(dot.len(), 6);
        assert_eq!(dot.lookup(4.0, Tolerance::default()).collect::<Vec<_>>(), vec![(2, 2)]);
    }

    #[test]
    fn fvs_of_small_templates() {
        let c3 = make_family(&FamilySpec::uniform(FamilyKind::Cycle(3), 1.0)).unwrap();
        assert_eq!(min_feedback_vertex_set(&c3).len(), 1);
        let t = make_family(&FamilySpec::uniform(FamilyKind::PerfectTree { c: 2, h: 2 }, 1.0)).unwrap();
        assert!(min_feedback_vertex_set(&t).is_empty());
        // Two triangles sharing vertex 0: one vertex breaks both.
        let bowtie = WeightedGraph::from_triples(
            5,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)],
        )
        .unwrap();
        assert_eq!(min_feedback_vertex_set(&bowtie), vec![0]);
    }
}
