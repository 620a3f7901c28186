//! Exponent bounds for configuration counts.
//!
//! Every entry is an exponent `x` (possibly `x + ε`) such that the maximum
//! number of configurations among `n` points grows at most (upper) or at
//! least (lower) like `n^x`. Values are exact rationals; `ε` is symbolic.

use crate::error::{Error, Result};
use crate::geometry::{Dim, Mode};
use crate::graphs::{family_memberships, find_best_cover, max_matching, FamilyKind, WeightedGraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

/// An exponent `value` or `value + ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub value: BigRational,
    pub plus_epsilon: bool,
    pub side: Side,
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Exponent {
    pub fn new(value: BigRational, plus_epsilon: bool, side: Side) -> Exponent {
        Exponent { value, plus_epsilon, side }
    }

    pub fn upper(num: i64, den: i64, plus_epsilon: bool) -> Exponent {
        Exponent::new(rat(num, den), plus_epsilon, Side::Upper)
    }

    pub fn lower(num: i64, den: i64, plus_epsilon: bool) -> Exponent {
        Exponent::new(rat(num, den), plus_epsilon, Side::Lower)
    }

    /// Orders by value, with `x + ε` just above `x` and below every rational `> x`.
    /// The side is ignored.
    pub fn cmp_level(&self, other: &Exponent) -> Ordering {
        self.value.cmp(&other.value).then(self.plus_epsilon.cmp(&other.plus_epsilon))
    }

    pub fn to_f64(&self) -> f64 {
        let n: f64 = self.value.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = self.value.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if self.plus_epsilon {
            f.write_str("+eps")?;
        }
        Ok(())
    }
}

/// Upper and (when known) lower exponents for `k`-chains, i.e. paths with `k` edges.
///
/// Dot-product chains are only covered in the plane.
pub fn chain_bounds(k: usize, mode: Mode, dim: Dim) -> Result<(Exponent, Option<Exponent>)> {
    if k == 0 {
        return Err(Error::InvalidParams("chains need k >= 1".into()));
    }
    let ki = k as i64;
    let out = match (mode, dim) {
        (Mode::Distance, Dim::Two) => match k {
            1 => (Exponent::upper(4, 3, false), Some(Exponent::lower(1, 1, false))),
            2 => (Exponent::upper(2, 1, false), Some(Exponent::lower(2, 1, false))),
            _ => match k % 3 {
                0 => (Exponent::upper(ki + 3, 3, false), Some(Exponent::lower(ki + 3, 3, false))),
                1 => (Exponent::upper(ki + 3, 3, true), Some(Exponent::lower(ki + 2, 3, true))),
                _ => (Exponent::upper(ki + 4, 3, false), Some(Exponent::lower(ki + 4, 3, false))),
            },
        },
        (Mode::DotProduct, Dim::Two) => match k {
            1 => (Exponent::upper(4, 3, false), Some(Exponent::lower(4, 3, false))),
            2 => (Exponent::upper(2, 1, false), Some(Exponent::lower(2, 1, false))),
            _ => (Exponent::upper(2 * (ki + 1), 3, false), Some(Exponent::lower((ki + 2) / 2, 1, false))),
        },
        (Mode::Distance, Dim::Three) => match k {
            1 => (Exponent::upper(295, 197, true), Some(Exponent::lower(4, 3, false))),
            2 => (Exponent::upper(2, 1, false), Some(Exponent::lower(2, 1, false))),
            _ if k.is_multiple_of(2) => (Exponent::upper(ki + 2, 2, true), Some(Exponent::lower(ki + 2, 2, false))),
            _ => (Exponent::upper(ki + 2, 2, true), None),
        },
        (Mode::DotProduct, Dim::Three) => {
            return Err(Error::UnsupportedCombination("dot-product chains in three dimensions".into()))
        }
    };
    Ok(out)
}

/// The chain term in the tree recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainTerm {
    /// `h + 1 + ε`: the spatial chain bound for a `2h`-chain.
    Corrected,
    /// `h + ε`, kept for comparison.
    Printed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeExponent {
    pub recurrence: Exponent,
    pub closed_form: Exponent,
}

impl TreeExponent {
    pub fn agree(&self) -> bool {
        self.recurrence == self.closed_form
    }
}

/// The sequence `a_{c,0..=h}` with ε flags.
pub fn tree_recurrence(c: usize, h: usize, term: ChainTerm) -> Vec<(BigRational, bool)> {
    let c = BigRational::from_integer(BigInt::from(c));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut a: Vec<(BigRational, bool)> = vec![(BigRational::one(), false)];
    if h >= 1 {
        a.push((c.clone(), false));
    }
    for level in 2..=h {
        let chain = BigRational::from_integer(BigInt::from(level))
            + match term {
                ChainTerm::Corrected => BigRational::one(),
                ChainTerm::Printed => BigRational::zero(),
            };
        let mut v = chain + (&c - &two) * &a[level - 1].0;
        let side_weight = &two * &c - &two;
        for item in a.iter().take(level - 1) {
            v += &side_weight * &item.0;
        }
        a.push((v, true));
    }
    a
}

/// `c^h (1 + 1/(c²−1)) + (−1)^h / (2(c+1)) + 1/(2(1−c))`
pub fn tree_closed_form(c: usize, h: usize) -> BigRational {
    let ci = BigInt::from(c);
    let cr = BigRational::from_integer(ci.clone());
    let ch = BigRational::from_integer(num_traits::pow(ci, h));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let sign = if h.is_multiple_of(2) { one.clone() } else { -one.clone() };
    &ch * (&one + &one / (&cr * &cr - &one)) + sign / (&two * (&cr + &one)) + &one / (&two * (&one - &cr))
}

/// Spatial upper exponent for uniformly weighted perfect `c`-ary trees:
/// the recurrence value and the closed form, which must coincide.
pub fn tree_exponent(c: usize, h: usize) -> Result<TreeExponent> {
    tree_exponent_with(c, h, ChainTerm::Corrected)
}

pub fn tree_exponent_with(c: usize, h: usize, term: ChainTerm) -> Result<TreeExponent> {
    if c < 2 {
        return Err(Error::InvalidParams(format!("trees need c >= 2, got {c}")));
    }
    let (value, eps) = tree_recurrence(c, h, term).pop().expect("nonempty");
    Ok(TreeExponent {
        recurrence: Exponent::new(value, eps, Side::Upper),
        closed_form: Exponent::new(tree_closed_form(c, h), h >= 2, Side::Upper),
    })
}

/// `(2^{h+3} − 3 + (−1)^h) / 6`, the binary specialization of the closed form.
pub fn binary_tree_formula(h: usize) -> BigRational {
    let p = num_traits::pow(BigInt::from(2), h + 3);
    let sign = if h.is_multiple_of(2) { 1 } else { -1 };
    BigRational::new(p - 3 + sign, BigInt::from(6))
}

/// Planar dot-product upper exponent for perfect binary trees of height `h`
/// (any weights), from covering by two-edge paths.
pub fn binary_tree_dot_bound(h: usize) -> BigRational {
    let p = num_traits::pow(BigInt::from(2), h);
    if h % 2 == 1 {
        BigRational::new(BigInt::from(2) * (BigInt::from(2) * &p - 1), BigInt::from(3))
    } else {
        BigRational::one() + BigRational::new(BigInt::from(4) * (p - 1), BigInt::from(3))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub rule: String,
    pub exponent: Exponent,
    pub citation: String,
    /// Cited construction not realized in this library; excluded from `best_lower`.
    pub external: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    pub best_upper: Exponent,
    pub best_lower: Option<Exponent>,
}

impl BoundReport {
    pub fn entry(&self, rule: &str, side: Side) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.rule == rule && e.exponent.side == side)
    }

    pub const CSV_HEADER: &'static str = "rule,side,exponent_num,exponent_den,plus_epsilon,citation";

    /// Rule rows followed by `best_upper` and `best_lower` rows, without the header.
    pub fn csv_rows(&self) -> Vec<String> {
        let row = |rule: &str, e: &Exponent, citation: &str| {
            format!(
                "{},{},{},{},{},{}",
                rule,
                e.side,
                e.value.numer(),
                e.value.denom(),
                e.plus_epsilon,
                citation.replace(',', ";")
            )
        };
        let mut rows: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let cite = if e.external { format!("{} (external)", e.citation) } else { e.citation.clone() };
                row(&e.rule, &e.exponent, &cite)
            })
            .collect();
        rows.push(row("best_upper", &self.best_upper, "minimum over upper entries"));
        if let Some(l) = &self.best_lower {
            rows.push(row("best_lower", l, "maximum over realized lower entries"));
        }
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in self.csv_rows() {
            s.push_str(&r);
            s.push('\n');
        }
        s
    }
}

struct Builder {
    entries: Vec<BoundEntry>,
}

impl Builder {
    fn add(&mut self, rule: &str, exponent: Exponent, citation: &str, external: bool) {
        self.entries.push(BoundEntry { rule: rule.into(), exponent, citation: citation.into(), external });
    }

    fn both(&mut self, rule: &str, value: BigRational, citation: &str) {
        self.add(rule, Exponent::new(value.clone(), false, Side::Upper), citation, false);
        self.add(rule, Exponent::new(value, false, Side::Lower), citation, false);
    }
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// All applicable bounds for `g` in the given setting and the best of each side.
pub fn catalog(g: &WeightedGraph, mode: Mode, dim: Dim) -> Result<BoundReport> {
    let mut b = Builder { entries: Vec::new() };
    let nv = g.vertex_count();
    let uniform = g.has_uniform_weights();
    b.add("trivial", Exponent::new(int(nv), false, Side::Upper), "each vertex has at most n choices", false);
    if nv == 1 {
        b.add("single_point", Exponent::new(int(1), false, Side::Lower), "every point is a configuration", false);
    }

    for fam in family_memberships(g) {
        match fam {
            FamilyKind::Path(k) => {
                let edges = k - 1;
                if let Ok((up, low)) = chain_bounds(edges, mode, dim) {
                    b.add("chain", up, &chain_citation(edges, mode, dim, Side::Upper), false);
                    if let Some(low) = low {
                        // Only short chains come from constructions realized here (single
                        // edges via stars of one batch, hinges via 2-stars).
                        let realized = edges == 2 || (edges == 1 && mode == Mode::Distance && dim == Dim::Two);
                        b.add("chain", low, &chain_citation(edges, mode, dim, Side::Lower), !realized);
                    }
                }
            }
            FamilyKind::Cycle(k) => {
                if k == 3 && dim == Dim::Two {
                    let cite = match mode {
                        Mode::Distance => "two triangles of one type share at most one pair of vertices",
                        Mode::DotProduct => "dot-product triangle case analysis",
                    };
                    b.add("triangle", Exponent::upper(4, 3, false), cite, false);
                    let low = match mode {
                        Mode::Distance => "one triangle through each point of a lattice",
                        Mode::DotProduct => "triangles through two anchors on a radial line",
                    };
                    b.add("triangle", Exponent::lower(1, 1, false), low, false);
                } else if let Ok((up, _)) = chain_bounds(k - 1, mode, dim) {
                    b.add("cycle_via_chain", up, "a k-cycle contains a (k-1)-chain", false);
                }
            }
            FamilyKind::Star(k) => {
                if dim == Dim::Two || mode == Mode::Distance {
                    let cite = if dim == Dim::Two { "planar k-star bound" } else { "spatial k-star bound" };
                    b.both("star", int(k), cite);
                }
            }
            FamilyKind::PerfectTree { c, h } => tree_rules(&mut b, c, h, uniform, mode, dim),
        }
    }

    if dim == Dim::Two && nv >= 2 {
        let cover = find_best_cover(g)?;
        b.add(
            "cover",
            Exponent::new(cover.exponent.clone(), false, Side::Upper),
            &format!(
                "partial cover by {} single edges and {} two-edge paths with {} uncovered vertices",
                cover.s,
                cover.t,
                cover.leftover.len()
            ),
            false,
        );
    }
    if dim == Dim::Three && mode == Mode::Distance && g.edge_count() > 0 {
        let m = max_matching(g)?;
        let value = rat(295, 197) * int(m.m) + int(m.r);
        b.add(
            "matching",
            Exponent::new(value, true, Side::Upper),
            &format!("spatial unit-distance bound on each of {} matched edges with {} unmatched vertices", m.m, m.r),
            false,
        );
    }

    let best_upper = b
        .entries
        .iter()
        .filter(|e| e.exponent.side == Side::Upper)
        .map(|e| &e.exponent)
        .min_by(|x, y| x.cmp_level(y))
        .cloned()
        .expect("trivial rule always present");
    let best_lower = b
        .entries
        .iter()
        .filter(|e| e.exponent.side == Side::Lower && !e.external)
        .map(|e| &e.exponent)
        .max_by(|x, y| x.cmp_level(y))
        .cloned();
    Ok(BoundReport { entries: b.entries, best_upper, best_lower })
}

fn tree_rules(b: &mut Builder, c: usize, h: usize, uniform: bool, mode: Mode, dim: Dim) {
    let leaves = int(c.pow(h as u32));
    match (mode, dim) {
        (Mode::Distance, Dim::Two) => b.both("tree", leaves, "planar perfect tree bound: leaves determine parents"),
        (Mode::DotProduct, Dim::Two) => {
            if uniform {
                b.both("tree", leaves, "planar perfect tree bound with one common dot product");
            }
            if c == 2 {
                b.add(
                    "binary_tree_cover",
                    Exponent::new(binary_tree_dot_bound(h), false, Side::Upper),
                    "binary tree covered by two-edge paths",
                    false,
                );
            }
        }
        (Mode::Distance, Dim::Three) => {
            if uniform {
                if c >= 3 {
                    b.both("tree", leaves.clone(), "spatial perfect tree bound for c >= 3");
                }
                if let Ok(t) = tree_exponent(c, h) {
                    b.add("tree_recurrence", t.recurrence, "spatial tree recurrence via chains and stars", false);
                }
            }
            b.add(
                "tree",
                Exponent::new(leaves, false, Side::Lower),
                "leaf batches on spheres about parent points",
                false,
            );
        }
        (Mode::DotProduct, Dim::Three) => {}
    }
}

fn chain_citation(k: usize, mode: Mode, dim: Dim, side: Side) -> String {
    let what = match (k, mode, dim, side) {
        (1, Mode::Distance, Dim::Two, Side::Upper) => "planar pair incidence bound",
        (1, Mode::Distance, Dim::Two, Side::Lower) => "single edges from one point",
        (1, Mode::DotProduct, Dim::Two, Side::Upper) => "planar dot-product pair bound",
        (1, Mode::DotProduct, Dim::Two, Side::Lower) => "sharpness of the planar dot-product pair bound",
        (2, _, _, _) => "hinge bound",
        (1, Mode::Distance, Dim::Three, Side::Upper) => "spatial unit-distance upper bound",
        (1, Mode::Distance, Dim::Three, Side::Lower) => "spatial unit-distance lower bound (up to a log log n factor)",
        (_, Mode::Distance, Dim::Two, Side::Upper) => "planar distance chain bound",
        (_, Mode::Distance, Dim::Two, Side::Lower) => "planar distance chain construction",
        (_, Mode::DotProduct, Dim::Two, Side::Upper) => "planar dot-product chain bound",
        (_, Mode::DotProduct, Dim::Two, Side::Lower) => "planar dot-product chain construction",
        (_, Mode::Distance, Dim::Three, Side::Upper) => "spatial distance chain bound",
        (_, Mode::Distance, Dim::Three, Side::Lower) => "spatial even chain construction",
        _ => "chain bound",
    };
    format!("{what} for {k}-chains")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_family, FamilySpec};

    #[test]
    fn chain_examples() {
        let (up, _) = chain_bounds(4, Mode::Distance, Dim::Two).unwrap();
        assert_eq!(up, Exponent::upper(7, 3, true));
        let (_, low) = chain_bounds(4, Mode::DotProduct, Dim::Two).unwrap();
        assert_eq!(low.unwrap(), Exponent::lower(3, 1, false));
        for mode in [Mode::Distance, Mode::DotProduct] {
            let (up, low) = chain_bounds(2, mode, Dim::Two).unwrap();
            assert_eq!(up, Exponent::upper(2, 1, false));
            assert_eq!(low.unwrap(), Exponent::lower(2, 1, false));
        }
        assert!(chain_bounds(3, Mode::Distance, Dim::Three).unwrap().1.is_none());
        assert!(matches!(
            chain_bounds(3, Mode::DotProduct, Dim::Three),
            Err(Error::UnsupportedCombination(_))
        ));
    }

    #[test]
    fn tree_values() {
        for (c, h, v) in [(2, 2, 5), (2, 3, 10), (3, 2, 10)] {
            let t = tree_exponent(c, h).unwrap();
            assert_eq!(t.recurrence.value, int(v));
            assert!(t.agree());
        }
        assert_eq!(binary_tree_formula(2), int(5));
        assert_eq!(binary_tree_dot_bound(1), int(2));
        assert_eq!(binary_tree_dot_bound(2), int(5));
        let printed = tree_exponent_with(2, 3, ChainTerm::Printed).unwrap();
        assert!(!printed.agree());
    }

    #[test]
    fn epsilon_ordering() {
        let a = Exponent::upper(7, 3, false);
        let b = Exponent::upper(7, 3, true);
        let c = Exponent::upper(10, 3, false);
        assert_eq!(a.cmp_level(&b), Ordering::Less);
        assert_eq!(b.cmp_level(&c), Ordering::Less);
    }

    #[test]
    fn catalog_examples() {
        let p5 = make_family(&FamilySpec::uniform(FamilyKind::Path(5), 1.0)).unwrap();
        let r = catalog(&p5, Mode::Distance, Dim::Two).unwrap();
        assert_eq!(r.best_upper, Exponent::upper(7, 3, true));
        assert_eq!(r.entry("cover", Side::Upper).unwrap().exponent.value, rat(10, 3));

        let c3 = make_family(&FamilySpec::uniform(FamilyKind::Cycle(3), 1.0)).unwrap();
        let r = catalog(&c3, Mode::DotProduct, Dim::Two).unwrap();
        assert_eq!(r.best_upper, Exponent::upper(4, 3, false));
        assert_eq!(r.best_lower, Some(Exponent::lower(1, 1, false)));

        let t23 = make_family(&FamilySpec::uniform(FamilyKind::PerfectTree { c: 2, h: 3 }, 1.0)).unwrap();
        let r = catalog(&t23, Mode::Distance, Dim::Three).unwrap();
        assert_eq!(r.best_upper, Exponent::upper(10, 1, true));
        assert_eq!(r.best_lower, Some(Exponent::lower(8, 1, false)));
        let m = &r.entry("matching", Side::Upper).unwrap().exponent;
        assert_eq!(m.value, rat(295 * 5, 197) + int(5));

        let t22 = make_family(&FamilySpec::uniform(FamilyKind::PerfectTree { c: 2, h: 2 }, 1.0)).unwrap();
        let r = catalog(&t22, Mode::DotProduct, Dim::Two).unwrap();
        assert_eq!(r.entry("cover", Side::Upper).unwrap().exponent.value, int(5));
        assert!(r.to_csv().starts_with(BoundReport::CSV_HEADER));
    }
}
