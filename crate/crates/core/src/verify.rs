//! Self-check suites behind the `verify` command.
//!
//! Each suite draws seeded random instances and compares a library routine
//! against an independent oracle or a defining property.

use crate::bounds::{binary_tree_formula, catalog, chain_bounds, tree_exponent, Exponent};
use crate::constructions::PointSet;
use crate::counting::{count_bruteforce, count_fast, CountQuery, Semantics};
use crate::geometry::{classify_alpha_lines, metric, Dim, LinePairClass, Mode, Point, Tolerance};
use crate::graphs::{
    cover_exponent, find_best_cover, make_family, max_matching, CoverResult, Edge, FamilyKind, FamilySpec,
    WeightedGraph,
};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Descriptions of the first few failures.
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> SuiteResult {
        SuiteResult { name, passed: 0, total: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

fn rel_close(value: f64, target: f64, eps: f64) -> bool {
    (value - target).abs() <= eps * target.abs().max(1.0)
}

fn random_nonzero_point(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let p = Point::new2(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if p.norm() > 0.5 {
            return p;
        }
    }
}

fn random_weight(rng: &mut ChaCha8Rng) -> f64 {
    let w: f64 = rng.gen_range(0.1..20.0);
    if rng.gen_bool(0.5) {
        w
    } else {
        -w
    }
}

/// Two alpha-lines of points on different radial lines meet in exactly one point.
pub fn single_point_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut s = SuiteResult::new("single point");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    while s.total < trials {
        let p = random_nonzero_point(&mut rng);
        let r = random_nonzero_point(&mut rng);
        let det = p.x() * r.y() - p.y() * r.x();
        if det.abs() < 0.1 * p.norm() * r.norm() {
            continue;
        }
        let (a, b) = (random_weight(&mut rng), random_weight(&mut rng));
        let ok = match classify_alpha_lines(&p, a, &r, b, tol) {
            Ok(LinePairClass::UniquePoint(q)) => rel_close(p.dot(&q), a, 1e-9) && rel_close(r.dot(&q), b, 1e-9),
            _ => false,
        };
        s.check(ok, || format!("p={p:?} a={a} r={r:?} b={b}"));
    }
    s
}

/// Lines coincide exactly when `a r = b p`; scaling `b` breaks coincidence.
pub fn coincidence_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut s = SuiteResult::new("coincident lines");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    while s.total < trials {
        let p = random_nonzero_point(&mut rng);
        let a = random_weight(&mut rng);
        let lambda: f64 = rng.gen_range(0.2..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let r = p.scale(lambda);
        let b = a * lambda;
        let same = matches!(classify_alpha_lines(&p, a, &r, b, tol), Ok(LinePairClass::Coincident(_)));
        let off = matches!(
            classify_alpha_lines(&p, a, &r, b * 1.25, tol),
            Ok(LinePairClass::ParallelDisjoint)
        );
        s.check(same && off, || format!("p={p:?} a={a} lambda={lambda}"));
    }
    s
}

/// Antipodal points never share an alpha-line for the same nonzero alpha.
pub fn antipodal_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut s = SuiteResult::new("antipodal");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    for _ in 0..trials {
        let p = random_nonzero_point(&mut rng);
        let a = random_weight(&mut rng);
        let ok = matches!(
            classify_alpha_lines(&p, a, &p.scale(-1.0), a, tol),
            Ok(LinePairClass::ParallelDisjoint)
        );
        s.check(ok, || format!("p={p:?} a={a}"));
    }
    s
}

/// A small random point set with many repeated metric values.
pub fn random_small_instance(rng: &mut ChaCha8Rng, mode: Mode, dim: Dim) -> (PointSet, WeightedGraph) {
    let n = rng.gen_range(3..=10);
    let d = dim.get();
    let mut pts: Vec<Point> = Vec::new();
    while pts.len() < n {
        let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-2..=2) as f64).collect();
        let p = Point::from_slice(&c).expect("finite");
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let points = PointSet::new(dim, pts).expect("valid");
    let mut values: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = metric(points.get(i), points.get(j), mode);
            if v != 0.0 {
                values.push(v);
            }
        }
    }
    let k = rng.gen_range(1..=5);
    let mut pairs: Vec<(usize, usize)> = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let m = if pairs.is_empty() { 0 } else { rng.gen_range(1..=pairs.len()) };
    let edges = pairs[..m]
        .iter()
        .map(|&(u, v)| Edge { u, v, w: *values.choose(rng).unwrap_or(&1.0) })
        .collect();
    (points, WeightedGraph::new(k, edges).expect("valid"))
}

/// Fast counts equal brute force under both semantics; injective counts never
/// exceed homomorphism counts.
pub fn oracle_equivalence_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut s = SuiteResult::new("counting oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let settings = [
        (Mode::Distance, Dim::Two),
        (Mode::DotProduct, Dim::Two),
        (Mode::Distance, Dim::Three),
        (Mode::DotProduct, Dim::Three),
    ];
    for i in 0..cases {
        let (mode, dim) = settings[i % settings.len()];
        let (e, g) = random_small_instance(&mut rng, mode, dim);
        let hom = CountQuery::new(mode, Semantics::Homomorphism);
        let inj = CountQuery::new(mode, Semantics::Injective);
        let fast = count_fast(&e, &g, &hom).map(|r| r.count);
        let brute = count_bruteforce(&e, &g, &hom).map(|r| r.count);
        let injective = count_bruteforce(&e, &g, &inj).map(|r| r.count);
        let fast_injective = count_fast(&e, &g, &inj).map(|r| r.count);
        let ok = match (&fast, &brute, &injective, &fast_injective) {
            (Ok(f), Ok(b), Ok(j), Ok(fj)) => f == b && j <= b && fj == j,
            _ => false,
        };
        s.check(ok, || {
            format!("{mode} {dim}D: fast={fast:?} brute={brute:?} injective={injective:?} fast injective={fast_injective:?}")
        });
    }
    s
}

/// Random graph on `n` vertices with edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge { u, v, w: 1.0 });
            }
        }
    }
    WeightedGraph::new(n, edges).expect("valid")
}

/// Best cover exponent by enumerating edge subsets whose components have at
/// most two edges (single edges and two-edge paths).
pub fn cover_oracle(g: &WeightedGraph) -> BigRational {
    // Component label and edge count per vertex, recomputed from the chosen edges.
    fn components(n: usize, g: &WeightedGraph, chosen: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut label: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for &e in chosen {
                let Edge { u, v, .. } = g.edges()[e];
                let m = label[u].min(label[v]);
                if label[u] != m || label[v] != m {
                    label[u] = m;
                    label[v] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut edges = vec![0; n];
        for &e in chosen {
            edges[label[g.edges()[e].u]] += 1;
        }
        (label, edges)
    }

    fn rec(g: &WeightedGraph, i: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        let n = g.vertex_count();
        if i == g.edge_count() {
            let (_, edges) = components(n, g, chosen);
            // Savings in thirds against all vertices uncovered: 2 per edge, 3 per path.
            let saving: usize = edges.iter().map(|&k| [0, 2, 3][k]).sum();
            *best = (*best).max(saving);
            return;
        }
        rec(g, i + 1, chosen, best);
        let Edge { u, v, .. } = g.edges()[i];
        let (label, edges) = components(n, g, chosen);
        if label[u] != label[v] && edges[label[u]] + edges[label[v]] < 2 {
            chosen.push(i);
            rec(g, i + 1, chosen, best);
            chosen.pop();
        }
    }

    let mut best = 0;
    rec(g, 0, &mut Vec::new(), &mut best);
    BigRational::new(
        num_bigint::BigInt::from(3 * g.vertex_count() - best),
        num_bigint::BigInt::from(3),
    )
}

/// Maximum matching size by include/exclude recursion over edges.
pub fn matching_oracle(g: &WeightedGraph) -> usize {
    fn rec(g: &WeightedGraph, i: usize, used: &mut Vec<bool>) -> usize {
        if i == g.edge_count() {
            return 0;
        }
        let skip = rec(g, i + 1, used);
        let Edge { u, v, .. } = g.edges()[i];
        if used[u] || used[v] {
            return skip;
        }
        used[u] = true;
        used[v] = true;
        let take = 1 + rec(g, i + 1, used);
        used[u] = false;
        used[v] = false;
        skip.max(take)
    }
    rec(g, 0, &mut vec![false; g.vertex_count()])
}

/// Structural validity of a cover result.
pub fn cover_is_valid(g: &WeightedGraph, c: &CoverResult) -> bool {
    let mut hits = vec![0usize; g.vertex_count()];
    for b in &c.p2_blocks {
        if !g.has_edge(b[0], b[1]) {
            return false;
        }
        hits[b[0]] += 1;
        hits[b[1]] += 1;
    }
    for b in &c.p3_blocks {
        if !g.has_edge(b[0], b[1]) || !g.has_edge(b[1], b[2]) {
            return false;
        }
        for &v in b {
            hits[v] += 1;
        }
    }
    for &v in &c.leftover {
        hits[v] += 1;
    }
    hits.iter().all(|&h| h == 1)
        && c.s == c.p2_blocks.len()
        && c.t == c.p3_blocks.len()
        && c.exponent == cover_exponent(c.s, c.t, c.leftover.len())
}

/// Cover and matching searches against the edge-subset oracles.
pub fn decomposition_suite(graphs: usize, seed: u64) -> SuiteResult {
    let mut s = SuiteResult::new("decomposition oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..graphs {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.45);
        let g = random_graph(&mut rng, n, p);
        let cover = find_best_cover(&g);
        let matching = max_matching(&g);
        let ok = match (&cover, &matching) {
            (Ok(c), Ok(m)) => {
                cover_is_valid(&g, c)
                    && c.exponent == cover_oracle(&g)
                    && m.m == matching_oracle(&g)
                    && m.r == n - 2 * m.m
            }
            _ => false,
        };
        s.check(ok, || format!("graph {:?}", g.edges().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>()));
    }
    s
}

/// Recurrence against closed form, and the binary specialization.
pub fn recurrence_suite() -> SuiteResult {
    let mut s = SuiteResult::new("tree recurrence");
    for c in 2..=6 {
        for h in 0..=16 {
            let ok = tree_exponent(c, h).map(|t| t.agree()).unwrap_or(false);
            s.check(ok, || format!("c={c} h={h}"));
        }
    }
    for h in 0..=16 {
        let ok = tree_exponent(2, h).map(|t| t.closed_form.value == binary_tree_formula(h)).unwrap_or(false);
        s.check(ok, || format!("binary h={h}"));
    }
    s
}

/// Fixed catalog values.
pub fn catalog_suite() -> SuiteResult {
    let mut s = SuiteResult::new("catalog fixed points");
    let fam = |k| make_family(&FamilySpec::uniform(k, 1.0)).expect("valid family");
    let p5 = catalog(&fam(FamilyKind::Path(5)), Mode::Distance, Dim::Two);
    s.check(p5.map(|r| r.best_upper == Exponent::upper(7, 3, true)).unwrap_or(false), || "P5".into());
    let c3 = catalog(&fam(FamilyKind::Cycle(3)), Mode::DotProduct, Dim::Two);
    s.check(
        c3.map(|r| r.best_upper == Exponent::upper(4, 3, false) && r.best_lower == Some(Exponent::lower(1, 1, false)))
            .unwrap_or(false),
        || "C3".into(),
    );
    let t23 = catalog(&fam(FamilyKind::PerfectTree { c: 2, h: 3 }), Mode::Distance, Dim::Three);
    s.check(t23.map(|r| r.best_upper == Exponent::upper(10, 1, true)).unwrap_or(false), || "T23".into());
    let k4 = chain_bounds(4, Mode::DotProduct, Dim::Two);
    s.check(k4.map(|(_, l)| l == Some(Exponent::lower(3, 1, false))).unwrap_or(false), || "dot 4-chain".into());
    s
}

/// Every suite at its default size.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    vec![
        single_point_suite(1000, seed),
        coincidence_suite(1000, seed.wrapping_add(1)),
        antipodal_suite(1000, seed.wrapping_add(2)),
        oracle_equivalence_suite(200, seed.wrapping_add(3)),
        decomposition_suite(100, seed.wrapping_add(4)),
        recurrence_suite(),
        catalog_suite(),
    ]
}
