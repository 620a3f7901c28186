//! Geometric primitives with tolerance-aware predicates.
//!
//! Everything here works in `f64`. Comparisons against a target value `w`
//! use the relative bound `eps * max(1, |w|)` supplied by [`Tolerance`].

use crate::error::{Error, Result};
use std::fmt;

/// Ambient dimension of a point or point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn new(d: usize) -> Result<Dim> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::InvalidDim(other)),
        }
    }

    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Which pairwise quantity an edge weight constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Distance,
    DotProduct,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Distance => f.write_str("distance"),
            Mode::DotProduct => f.write_str("dot"),
        }
    }
}

/// A point in the plane or in space. Planar points keep `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    xyz: [f64; 3],
    dim: Dim,
}

impl Point {
    pub fn new2(x: f64, y: f64) -> Point {
        Point { xyz: [x, y, 0.0], dim: Dim::Two }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Point {
        Point { xyz: [x, y, z], dim: Dim::Three }
    }

    /// Builds a point from 2 or 3 finite coordinates.
    pub fn from_slice(coords: &[f64]) -> Result<Point> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        match coords.len() {
            2 => Ok(Point::new2(coords[0], coords[1])),
            3 => Ok(Point::new3(coords[0], coords[1], coords[2])),
            d => Err(Error::InvalidDim(d)),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.xyz[..self.dim.get()]
    }

    pub fn x(&self) -> f64 {
        self.xyz[0]
    }

    pub fn y(&self) -> f64 {
        self.xyz[1]
    }

    pub fn z(&self) -> f64 {
        self.xyz[2]
    }

    pub fn is_finite(&self) -> bool {
        self.xyz.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        match self.dim {
            Dim::Two => self.xyz[0] * other.xyz[0] + self.xyz[1] * other.xyz[1],
            Dim::Three => {
                self.xyz[0] * other.xyz[0] + self.xyz[1] * other.xyz[1] + self.xyz[2] * other.xyz[2]
            }
        }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        let dx = self.xyz[0] - other.xyz[0];
        let dy = self.xyz[1] - other.xyz[1];
        match self.dim {
            Dim::Two => (dx * dx + dy * dy).sqrt(),
            Dim::Three => {
                let dz = self.xyz[2] - other.xyz[2];
                (dx * dx + dy * dy + dz * dz).sqrt()
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add(&self, other: &Point) -> Point {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Point {
        Point {
            xyz: [self.xyz[0] * s, self.xyz[1] * s, self.xyz[2] * s],
            dim: self.dim,
        }
    }

    /// 3D cross product; planar points are treated as lying in `z = 0`.
    pub fn cross(&self, other: &Point) -> Point {
        let [a1, a2, a3] = self.xyz;
        let [b1, b2, b3] = other.xyz;
        Point::new3(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.coords().iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    fn zip(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Point {
        Point {
            xyz: [
                f(self.xyz[0], other.xyz[0]),
                f(self.xyz[1], other.xyz[1]),
                f(self.xyz[2], other.xyz[2]),
            ],
            dim: self.dim,
        }
    }
}

/// Relative comparison tolerance, `0 < eps < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Tolerance> {
        if eps > 0.0 && eps < 1.0 {
            Ok(Tolerance(eps))
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.0
    }

    /// Absolute slack allowed when comparing a quantity against `w`.
    pub fn bound(&self, w: f64) -> f64 {
        self.0 * w.abs().max(1.0)
    }

    pub fn close(&self, value: f64, w: f64) -> bool {
        (value - w).abs() <= self.bound(w)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::DEFAULT_EPS)
    }
}

/// The pairwise quantity constrained by `mode`.
#[inline]
pub fn metric(x: &Point, y: &Point, mode: Mode) -> f64 {
    match mode {
        Mode::Distance => x.dist(y),
        Mode::DotProduct => x.dot(y),
    }
}

/// Whether the pair `(x, y)` realizes weight `w` under `mode`.
pub fn edge_satisfied(x: &Point, y: &Point, mode: Mode, w: f64, tol: Tolerance) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim().get(),
            got: y.dim().get(),
        });
    }
    Ok(tol.close(metric(x, y, mode), w))
}

/// A planar line given by a point on it and a unit direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line2 {
    pub anchor: Point,
    pub direction: Point,
}

impl Line2 {
    pub fn at(&self, t: f64) -> Point {
        self.anchor.add(&self.direction.scale(t))
    }

    /// Perpendicular distance from `q` to the line.
    pub fn distance_to(&self, q: &Point) -> f64 {
        let d = q.sub(&self.anchor);
        (d.x() * self.direction.y() - d.y() * self.direction.x()).abs()
    }
}

fn require_planar(p: &Point) -> Result<()> {
    if p.dim() != Dim::Two {
        return Err(Error::DimensionMismatch { expected: 2, got: p.dim().get() });
    }
    Ok(())
}

fn check_anchor(p: &Point, alpha: f64, tol: Tolerance) -> Result<()> {
    require_planar(p)?;
    if !p.is_finite() || !alpha.is_finite() {
        return Err(Error::NonFinite);
    }
    if p.norm() <= tol.eps() {
        return Err(Error::OriginAnchor);
    }
    if alpha == 0.0 {
        return Err(Error::ZeroWeight);
    }
    Ok(())
}

/// The line `{q : p . q = alpha}`, perpendicular to the radial line through `p`.
///
/// The anchor is the foot point `alpha * p / |p|^2`.
pub fn alpha_line(p: &Point, alpha: f64, tol: Tolerance) -> Result<Line2> {
    check_anchor(p, alpha, tol)?;
    let n2 = p.dot(p);
    let n = n2.sqrt();
    Ok(Line2 {
        anchor: p.scale(alpha / n2),
        direction: Point::new2(p.y() / n, -p.x() / n),
    })
}

/// How two alpha-lines relate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinePairClass {
    /// Anchors on distinct radial lines: the lines meet in exactly one point.
    UniquePoint(Point),
    /// The two lines are the same line.
    Coincident(Line2),
    /// Same direction, no common point.
    ParallelDisjoint,
}

/// Classifies the pair `l_alpha(p)`, `l_beta(r)`.
///
/// Coincidence is decided first by `|alpha r - beta p| <= eps * max(|alpha r|, |beta p|)`,
/// then parallelism by the cross product of the anchors.
pub fn classify_alpha_lines(
    p: &Point,
    alpha: f64,
    r: &Point,
    beta: f64,
    tol: Tolerance,
) -> Result<LinePairClass> {
    check_anchor(p, alpha, tol)?;
    check_anchor(r, beta, tol)?;
    let ar = r.scale(alpha);
    let bp = p.scale(beta);
    if ar.sub(&bp).norm() <= tol.eps() * ar.norm().max(bp.norm()) {
        return Ok(LinePairClass::Coincident(alpha_line(p, alpha, tol)?));
    }
    let det = p.x() * r.y() - p.y() * r.x();
    if det.abs() <= tol.eps() * p.norm() * r.norm() {
        return Ok(LinePairClass::ParallelDisjoint);
    }
    let qx = (alpha * r.y() - beta * p.y()) / det;
    let qy = (p.x() * beta - r.x() * alpha) / det;
    Ok(LinePairClass::UniquePoint(Point::new2(qx, qy)))
}

/// Result of intersecting two circles.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleIntersection {
    /// One point (tangency) or two points.
    Points(Vec<Point>),
    CoincidentCircle,
    Empty,
}

/// Intersection of the circles `|x - c1| = r1` and `|x - c2| = r2` in the plane.
pub fn circle_circle(
    c1: &Point,
    r1: f64,
    c2: &Point,
    r2: f64,
    tol: Tolerance,
) -> Result<CircleIntersection> {
    require_planar(c1)?;
    require_planar(c2)?;
    for r in [r1, r2] {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::NonPositiveRadius(r));
        }
    }
    let t1 = tol.bound(r1);
    let t2 = tol.bound(r2);
    let delta = c2.sub(c1);
    let d = delta.norm();
    let scale = c1.max_abs().max(c2.max_abs()).max(1.0);
    if d <= tol.eps() * scale {
        if (r1 - r2).abs() <= t1.max(t2) {
            return Ok(CircleIntersection::CoincidentCircle);
        }
        return Ok(CircleIntersection::Empty);
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    let u = delta.scale(1.0 / d);
    let base = c1.add(&u.scale(a));
    // |h^2| / (2 r_i) is the radial residual of the foot point on circle i.
    let slack = (2.0 * r1 * t1).min(2.0 * r2 * t2);
    if h2 < -slack {
        return Ok(CircleIntersection::Empty);
    }
    if h2 <= slack {
        return Ok(CircleIntersection::Points(vec![base]));
    }
    let h = h2.sqrt();
    let perp = Point::new2(-u.y(), u.x());
    Ok(CircleIntersection::Points(vec![
        base.add(&perp.scale(h)),
        base.sub(&perp.scale(h)),
    ]))
}

/// Result of intersecting three spheres.
#[derive(Clone, Debug, PartialEq)]
pub enum SphereIntersection {
    Points(Vec<Point>),
    /// The spheres share a full circle with the given center, unit normal and radius.
    InfiniteCircle { center: Point, normal: Point, radius: f64 },
    Empty,
}

/// Intersection of three spheres in space.
pub fn sphere_triple(centers: &[Point; 3], radii: &[f64; 3], tol: Tolerance) -> Result<SphereIntersection> {
    for c in centers {
        if c.dim() != Dim::Three {
            return Err(Error::DimensionMismatch { expected: 3, got: c.dim().get() });
        }
    }
    for &r in radii {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::NonPositiveRadius(r));
        }
    }
    let scale = centers.iter().fold(1.0f64, |m, c| m.max(c.max_abs()));
    for i in 0..3 {
        for j in (i + 1)..3 {
            if centers[i].dist(&centers[j]) <= tol.eps() * scale {
                return Err(Error::DuplicateCenters);
            }
        }
    }
    let [c1, c2, c3] = centers;
    let [r1, r2, r3] = *radii;
    let t1 = tol.bound(r1);
    // Radical planes n_i . x = d_i.
    let n1 = c2.sub(c1).scale(2.0);
    let d1 = r1 * r1 - r2 * r2 + c2.dot(c2) - c1.dot(c1);
    let n2 = c3.sub(c1).scale(2.0);
    let d2 = r1 * r1 - r3 * r3 + c3.dot(c3) - c1.dot(c1);
    let u = n1.cross(&n2);
    let u2 = u.dot(&u);
    let n1n = n1.norm();
    let n2n = n2.norm();

    if u.norm() <= tol.eps() * n1n * n2n {
        // Collinear centers: the radical planes are parallel.
        let lambda = n1.dot(&n2) / (n1n * n1n);
        let plane_slack = tol.eps() * d1.abs().max(d2.abs()).max(scale * scale).max(1.0);
        if (d2 - lambda * d1).abs() > plane_slack {
            return Ok(SphereIntersection::Empty);
        }
        let normal = n1.scale(1.0 / n1n);
        let s = (d1 - n1.dot(c1)) / n1n;
        let rho2 = r1 * r1 - s * s;
        let center = c1.add(&normal.scale(s));
        let slack = 2.0 * r1 * t1;
        if rho2 < -slack {
            return Ok(SphereIntersection::Empty);
        }
        if rho2 <= slack {
            return Ok(SphereIntersection::Points(vec![center]));
        }
        return Ok(SphereIntersection::InfiniteCircle {
            center,
            normal,
            radius: rho2.sqrt(),
        });
    }

    let n1n2 = n1.dot(&n2);
    let x0 = n1
        .scale(d1 * n2n * n2n - d2 * n1n2)
        .add(&n2.scale(d2 * n1n * n1n - d1 * n1n2))
        .scale(1.0 / u2);
    let dir = u.scale(1.0 / u2.sqrt());
    let w = x0.sub(c1);
    let b = w.dot(&dir);
    let disc = b * b - (w.dot(&w) - r1 * r1);
    let slack = 2.0 * r1 * t1;
    if disc < -slack {
        return Ok(SphereIntersection::Empty);
    }
    if disc <= slack {
        return Ok(SphereIntersection::Points(vec![x0.sub(&dir.scale(b))]));
    }
    let s = disc.sqrt();
    Ok(SphereIntersection::Points(vec![
        x0.add(&dir.scale(-b + s)),
        x0.add(&dir.scale(-b - s)),
    ]))
}
