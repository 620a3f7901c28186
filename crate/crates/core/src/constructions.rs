//! Point sets that are rich in a chosen configuration type.
//!
//! Every generator is a pure function of its parameters and seed. Batches of
//! points are laid out with equally spaced parameters (angles on circles,
//! ordinates on lines, lattice indices on spheres) from a seeded phase.

use crate::error::{Error, Result};
use crate::geometry::{Dim, Mode, Point};
use crate::graphs::{make_family, tree_size, FamilyKind, FamilySpec, WeightedGraph, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
/// Points closer than `MIN_SEPARATION * scale` are treated as collisions.
const MIN_SEPARATION: f64 = 1e-8;
const PLACEMENT_ATTEMPTS: u64 = 8;

/// An ordered list of points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: Dim,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: Dim, points: Vec<Point>) -> Result<PointSet> {
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim.get(), got: p.dim().get() });
            }
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.get(), got: p.dim().get() });
        }
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        self.points.push(p);
        Ok(())
    }

    /// Largest absolute coordinate, at least 1.
    pub fn scale(&self) -> f64 {
        self.points.iter().fold(1.0f64, |m, p| m.max(p.max_abs()))
    }

    /// Smallest pairwise Euclidean distance (infinity for fewer than 2 points).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.min(p.dist(q));
            }
        }
        best
    }
}

/// Which extremal construction to build.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionKind {
    /// `{(a g^j, 0) : j = 1..n}`
    ProgressionLine { a: f64, g: f64 },
    /// Many dot-product triangles of one type sharing two anchors on a radial line.
    CoincidentTriangle { alphas: [f64; 3] },
    StarSet { k: usize, weights: Vec<f64>, mode: Mode },
    TreeSet { c: usize, h: usize, weights: Weights, mode: Mode },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub n: usize,
    pub dim: Dim,
    pub seed: u64,
}

/// A generated point set with the template and mode it is built for.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub points: PointSet,
    pub template: WeightedGraph,
    pub mode: Mode,
}

/// Builds the construction described by `spec`.
///
/// For the progression line the returned template is the triangle type of the
/// consecutive triple `(ag, ag^2, ag^3)`.
pub fn generate(spec: &ConstructionSpec) -> Result<Construction> {
    match &spec.kind {
        ConstructionKind::ProgressionLine { a, g } => {
            if spec.dim != Dim::Two {
                return Err(Error::InvalidDim(spec.dim.get()));
            }
            let points = progression_line(spec.n, *a, *g)?;
            let a2 = a * a;
            let template = make_family(&FamilySpec::new(
                FamilyKind::Cycle(3),
                Weights::Explicit(vec![a2 * g.powi(3), a2 * g.powi(5), a2 * g.powi(4)]),
            ))?;
            Ok(Construction { points, template, mode: Mode::DotProduct })
        }
        ConstructionKind::CoincidentTriangle { alphas } => {
            if spec.dim != Dim::Two {
                return Err(Error::InvalidDim(spec.dim.get()));
            }
            let (points, alphas) = coincident_triangle_set(spec.n, *alphas, spec.seed)?;
            let template = make_family(&FamilySpec::new(FamilyKind::Cycle(3), Weights::Explicit(alphas.to_vec())))?;
            Ok(Construction { points, template, mode: Mode::DotProduct })
        }
        ConstructionKind::StarSet { k, weights, mode } => {
            let points = star_set(spec.n, *k, weights, spec.dim, *mode, spec.seed)?;
            let template = make_family(&FamilySpec::new(FamilyKind::Star(*k), Weights::Explicit(weights.clone())))?;
            Ok(Construction { points, template, mode: *mode })
        }
        ConstructionKind::TreeSet { c, h, weights, mode } => {
            let points = tree_set(spec.n, *c, *h, weights, spec.dim, *mode, spec.seed)?;
            let template = make_family(&FamilySpec::new(FamilyKind::PerfectTree { c: *c, h: *h }, weights.clone()))?;
            Ok(Construction { points, template, mode: *mode })
        }
    }
}

/// Geometric progression `(a g^j, 0)`, `j = 1..=n`, on the positive x-axis.
pub fn progression_line(n: usize, a: f64, g: f64) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::InvalidParams("progression needs n >= 1".into()));
    }
    if a.is_nan() || a <= 0.0 || g.is_nan() || g <= 1.0 {
        return Err(Error::InvalidParams(format!("progression needs a > 0 and g > 1, got a={a}, g={g}")));
    }
    let mut points = Vec::with_capacity(n);
    let mut x = a;
    for _ in 0..n {
        x *= g;
        if !x.is_finite() {
            return Err(Error::InvalidParams(format!("a g^j overflows for n={n}")));
        }
        points.push(Point::new2(x, 0.0));
    }
    PointSet::new(Dim::Two, points)
}

/// Two anchors on the x-axis whose alpha-lines coincide, plus `n - 2` points
/// on that common line.
///
/// With `R = sqrt(a2 a3 / a1)`: `x3 = (R, 0)`, `x1 = (a3 / R, 0)` and
/// `q_i = (a1 R / a3, t_i)`, so every `(x1, q_i, x3)` has
/// `x1.q = a1`, `q.x3 = a2`, `x3.x1 = a3`. Output order is `x1, x3, q_0, ...`.
pub fn coincident_triangle_set(n: usize, alphas: [f64; 3], seed: u64) -> Result<(PointSet, [f64; 3])> {
    let [a1, a2, a3] = alphas;
    if n < 3 {
        return Err(Error::InvalidParams(format!("triangle set needs n >= 3, got {n}")));
    }
    if alphas.iter().any(|a| !a.is_finite() || *a == 0.0) {
        return Err(Error::DegenerateType("weights must be finite and nonzero".into()));
    }
    if (a1 - a2).abs() <= 1e-12 * a1.abs().max(a2.abs()) {
        return Err(Error::DegenerateType(format!("a1 = a2 = {a1} forces x1 = x3")));
    }
    let r2 = a2 * a3 / a1;
    if r2.is_nan() || r2 <= 0.0 {
        return Err(Error::DegenerateType(format!("a2 a3 / a1 = {r2} must be positive")));
    }
    let r = r2.sqrt();
    let x3 = Point::new2(r, 0.0);
    let x1 = Point::new2(a3 / r, 0.0);
    let line_x = a1 * r / a3;
    let phase = ChaCha8Rng::seed_from_u64(seed).gen_range(0.25..0.75);
    let spacing = r.max(1.0);
    let mut points = vec![x1, x3];
    // Positive ordinates keep the q_i off the x-axis, hence distinct from x1 and x3.
    points.extend((0..n - 2).map(|i| Point::new2(line_x, spacing * (i as f64 + phase))));
    Ok((PointSet::new(Dim::Two, points)?, alphas))
}

/// A hub with `floor((n - 1) / k)` points at each of the `k` prescribed weights.
///
/// Distance mode: hub at the origin, batches on circles (2D) or spheres (3D)
/// of radius `w_j`. Dot mode (2D only): hub `(1, 0)`, batches on the lines
/// `x = w_j`. Repeated weights share a circle or line with interleaved
/// positions. Surplus points go far away along a generic ray.
pub fn star_set(n: usize, k: usize, weights: &[f64], dim: Dim, mode: Mode, seed: u64) -> Result<PointSet> {
    if k < 1 {
        return Err(Error::InvalidParams("star needs k >= 1".into()));
    }
    if weights.len() != k {
        return Err(Error::WeightCountMismatch { expected: k, got: weights.len() });
    }
    if n < k + 1 {
        return Err(Error::InvalidParams(format!("star set needs n >= k + 1 = {}, got {n}", k + 1)));
    }
    check_weights(weights, mode, dim)?;
    let per = (n - 1) / k;
    let hub = match (mode, dim) {
        (Mode::Distance, Dim::Two) => Point::new2(0.0, 0.0),
        (Mode::Distance, Dim::Three) => Point::new3(0.0, 0.0, 0.0),
        (Mode::DotProduct, _) => Point::new2(1.0, 0.0),
    };
    place_with_retries(n, dim, seed, |phase0| {
        let mut points = vec![hub];
        for (j, &w) in weights.iter().enumerate() {
            let phase = phase0 + j as f64 / k as f64;
            points.extend(batch(&hub, w, per, phase, dim, mode));
        }
        points
    })
}

/// A perfect `c`-ary tree skeleton with `floor(n / c^h)` candidates per leaf.
///
/// One copy of the tree minus its leaves is embedded at seeded generic
/// positions; then each height-`(h-1)` vertex gets one batch per child on the
/// circle/sphere (distance) or alpha-line (dot) of that child's edge weight.
/// The output holds the `(c^h - 1)/(c - 1)` skeleton points plus
/// `c^h floor(n / c^h)` batch points, padded with far points up to `n`.
pub fn tree_set(
    n: usize,
    c: usize,
    h: usize,
    weights: &Weights,
    dim: Dim,
    mode: Mode,
    seed: u64,
) -> Result<PointSet> {
    if c < 2 || h < 1 {
        return Err(Error::InvalidParams(format!("tree set needs c >= 2 and h >= 1, got c={c}, h={h}")));
    }
    let template = make_family(&FamilySpec::new(FamilyKind::PerfectTree { c, h }, weights.clone()))?;
    let leaves = c.pow(h as u32);
    let per = n / leaves;
    if per == 0 {
        return Err(Error::InvalidParams(format!("tree set needs n >= c^h = {leaves}, got {n}")));
    }
    // Edge to vertex v >= 1 has index v - 1 under breadth-first numbering.
    let edge_w: Vec<f64> = template.edges().iter().map(|e| e.w).collect();
    if mode == Mode::DotProduct && !template.has_uniform_weights() {
        return Err(Error::UnsupportedMode("dot-product trees need uniform weights".into()));
    }
    check_weights(&edge_w, mode, dim)?;
    let internal = tree_size(c, h - 1);
    let first_parent = internal - c.pow((h - 1) as u32);

    place_with_retries(n, dim, seed, |phase0| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ phase0.to_bits());
        let mut pos: Vec<Point> = Vec::with_capacity(internal);
        pos.push(match (mode, dim) {
            (Mode::Distance, Dim::Two) => Point::new2(0.0, 0.0),
            (Mode::Distance, Dim::Three) => Point::new3(0.0, 0.0, 0.0),
            (Mode::DotProduct, _) => {
                let t = rng.gen_range(0.0..2.0 * PI);
                Point::new2(t.cos(), t.sin())
            }
        });
        for v in 1..internal {
            let p = pos[(v - 1) / c];
            let w = edge_w[v - 1];
            let q = match mode {
                Mode::Distance => p.add(&random_unit(&mut rng, dim).scale(w)),
                Mode::DotProduct => {
                    let n2 = p.dot(&p);
                    let perp = Point::new2(-p.y(), p.x()).scale(1.0 / n2.sqrt());
                    let t = rng.gen_range(0.5..1.5) * (1.0 + (w / n2.sqrt()).abs());
                    p.scale(w / n2).add(&perp.scale(t))
                }
            };
            pos.push(q);
        }
        let mut points = pos.clone();
        for (v, parent) in pos.iter().enumerate().take(internal).skip(first_parent) {
            for j in 0..c {
                let child = c * v + 1 + j;
                let phase = phase0 + j as f64 / c as f64;
                points.extend(batch(parent, edge_w[child - 1], per, phase, dim, mode));
            }
        }
        points
    })
}

fn check_weights(weights: &[f64], mode: Mode, dim: Dim) -> Result<()> {
    for &w in weights {
        if !w.is_finite() || w == 0.0 {
            return Err(Error::ZeroWeight);
        }
        if mode == Mode::Distance && w < 0.0 {
            return Err(Error::NegativeRadius(w));
        }
    }
    if mode == Mode::DotProduct && dim != Dim::Two {
        return Err(Error::InvalidDim(dim.get()));
    }
    Ok(())
}

/// `count` points realizing weight `w` against `center`, with parameters
/// offset by `phase` (in units of the spacing).
fn batch(center: &Point, w: f64, count: usize, phase: f64, dim: Dim, mode: Mode) -> Vec<Point> {
    let m = count as f64;
    match (mode, dim) {
        (Mode::Distance, Dim::Two) => (0..count)
            .map(|i| {
                let theta = 2.0 * PI * (i as f64 + phase) / m;
                center.add(&Point::new2(w * theta.cos(), w * theta.sin()))
            })
            .collect(),
        (Mode::Distance, Dim::Three) => (0..count)
            .map(|i| {
                // Fibonacci lattice; the phase rotates about the z-axis.
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / m;
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let phi = i as f64 * GOLDEN_ANGLE + 2.0 * PI * phase;
                center.add(&Point::new3(w * rho * phi.cos(), w * rho * phi.sin(), w * z))
            })
            .collect(),
        (Mode::DotProduct, _) => {
            let n2 = center.dot(center);
            let norm = n2.sqrt();
            let foot = center.scale(w / n2);
            let dir = Point::new2(-center.y() / norm, center.x() / norm);
            let spacing = 1.0 + foot.norm();
            (0..count)
                .map(|i| foot.add(&dir.scale(spacing * (i as f64 + 1.0 + phase))))
                .collect()
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: Dim) -> Point {
    match dim {
        Dim::Two => {
            let t = rng.gen_range(0.0..2.0 * PI);
            Point::new2(t.cos(), t.sin())
        }
        Dim::Three => {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let t = rng.gen_range(0.0..2.0 * PI);
            let rho = (1.0 - z * z).sqrt();
            Point::new3(rho * t.cos(), rho * t.sin(), z)
        }
    }
}

/// Runs `build` with seeded phases until the points are pairwise separated,
/// then pads with far points up to `n`.
fn place_with_retries(
    n: usize,
    dim: Dim,
    seed: u64,
    build: impl Fn(f64) -> Vec<Point>,
) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PLACEMENT_ATTEMPTS {
        let phase: f64 = rng.gen_range(0.05..0.45);
        let mut set = PointSet::new(dim, build(phase))?;
        if set.min_separation() > MIN_SEPARATION * set.scale() {
            pad_far(&mut set, n)?;
            return Ok(set);
        }
    }
    Err(Error::InvalidParams("could not place points in general position".into()))
}

/// Appends points at exponentially growing distance along a generic ray.
fn pad_far(set: &mut PointSet, n: usize) -> Result<()> {
    let missing = n.saturating_sub(set.len());
    let base = 8.0 * set.scale();
    let dir = match set.dim() {
        Dim::Two => Point::new2(0.8, 0.6),
        Dim::Three => Point::new3(0.64, 0.48, 0.6),
    };
    for i in 0..missing {
        set.push(dir.scale(base * 2f64.powi(i as i32 + 1)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_examples() {
        let s = progression_line(3, 1.0, 2.0).unwrap();
        assert_eq!(
            s.points(),
            &[Point::new2(2.0, 0.0), Point::new2(4.0, 0.0), Point::new2(8.0, 0.0)]
        );
        assert_eq!(progression_line(1, 5.0, 3.0).unwrap().points(), &[Point::new2(15.0, 0.0)]);
        let s = progression_line(4, 1.0, 2.0).unwrap();
        assert_eq!(s.get(0).dot(s.get(1)), 8.0);
        assert!(progression_line(3, 0.0, 2.0).is_err());
        assert!(progression_line(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn triangle_anchors() {
        let (s, _) = coincident_triangle_set(5, [1.0, 4.0, 2.0], 0).unwrap();
        let r = 8f64.sqrt();
        assert!((s.get(0).x() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((s.get(1).x() - r).abs() < 1e-12);
        for q in &s.points()[2..] {
            assert!((q.x() - 2f64.sqrt()).abs() < 1e-12);
            assert!((s.get(0).dot(q) - 1.0).abs() < 1e-9);
            assert!((q.dot(s.get(1)) - 4.0).abs() < 1e-9);
        }
        assert!((s.get(0).dot(s.get(1)) - 2.0).abs() < 1e-9);
        assert!(matches!(
            coincident_triangle_set(3, [1.0, 1.0, 1.0], 0),
            Err(Error::DegenerateType(_))
        ));
        assert!(matches!(
            coincident_triangle_set(3, [1.0, -4.0, 2.0], 0),
            Err(Error::DegenerateType(_))
        ));
    }

    #[test]
    fn star_layout() {
        let s = star_set(7, 2, &[1.0, 2.0], Dim::Two, Mode::Distance, 3).unwrap();
        assert_eq!(s.len(), 7);
        let o = s.get(0);
        assert_eq!(s.points()[1..].iter().filter(|p| (p.dist(o) - 1.0).abs() < 1e-9).count(), 3);
        assert_eq!(s.points()[1..].iter().filter(|p| (p.dist(o) - 2.0).abs() < 1e-9).count(), 3);

        let s = star_set(7, 2, &[1.0, 2.0], Dim::Two, Mode::DotProduct, 3).unwrap();
        assert_eq!(*s.get(0), Point::new2(1.0, 0.0));
        assert_eq!(s.points()[1..].iter().filter(|p| (p.x() - 1.0).abs() < 1e-9).count(), 3);
        assert_eq!(s.points()[1..].iter().filter(|p| (p.x() - 2.0).abs() < 1e-9).count(), 3);

        let s = star_set(4, 3, &[1.0, 1.0, 1.0], Dim::Three, Mode::Distance, 0).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.min_separation() > 1e-6);

        assert_eq!(
            star_set(7, 2, &[1.0, -2.0], Dim::Two, Mode::Distance, 0),
            Err(Error::NegativeRadius(-2.0))
        );
        assert_eq!(
            star_set(7, 2, &[1.0, 2.0], Dim::Three, Mode::DotProduct, 0),
            Err(Error::InvalidDim(3))
        );
    }

    #[test]
    fn star_pads_to_n() {
        let s = star_set(10, 3, &[1.0, 2.0, 3.0], Dim::Two, Mode::Distance, 1).unwrap();
        assert_eq!(s.len(), 10);
        let s = star_set(12, 3, &[1.0, 2.0, 3.0], Dim::Two, Mode::Distance, 1).unwrap();
        assert_eq!(s.len(), 12);
        assert!(s.get(11).norm() > 20.0);
    }

    #[test]
    fn tree_layout() {
        let s = tree_set(9, 2, 1, &Weights::Explicit(vec![1.0, 2.0]), Dim::Two, Mode::Distance, 0).unwrap();
        assert_eq!(s.len(), 9);
        let s = tree_set(17, 2, 2, &Weights::Uniform(1.0), Dim::Two, Mode::Distance, 0).unwrap();
        assert_eq!(s.len(), 3 + 16);
        let s = tree_set(10, 3, 1, &Weights::Uniform(1.0), Dim::Two, Mode::DotProduct, 0).unwrap();
        assert_eq!(s.len(), 10);
        for q in &s.points()[1..] {
            assert!((s.get(0).dot(q) - 1.0).abs() < 1e-9);
        }
        assert!(matches!(
            tree_set(10, 2, 1, &Weights::Explicit(vec![1.0, 2.0]), Dim::Two, Mode::DotProduct, 0),
            Err(Error::UnsupportedMode(_))
        ));
        assert!(tree_set(3, 2, 2, &Weights::Uniform(1.0), Dim::Two, Mode::Distance, 0).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = tree_set(40, 2, 2, &Weights::Uniform(1.0), Dim::Three, Mode::Distance, 9).unwrap();
        let b = tree_set(40, 2, 2, &Weights::Uniform(1.0), Dim::Three, Mode::Distance, 9).unwrap();
        assert_eq!(a, b);
    }
}
