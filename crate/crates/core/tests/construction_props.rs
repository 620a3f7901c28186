use num_bigint::BigUint;
use pointconf::constructions::{coincident_triangle_set, star_set, tree_set};
use pointconf::counting::{count_bruteforce, count_fast, CountQuery, Semantics};
use pointconf::graphs::{make_family, FamilyKind, FamilySpec, WeightedGraph, Weights, Edge};
use pointconf::{Dim, Mode};
use proptest::prelude::*;

fn injective(e: &pointconf::PointSet, g: &WeightedGraph, mode: Mode) -> BigUint {
    count_bruteforce(e, g, &CountQuery::new(mode, Semantics::Injective)).unwrap().count
}

fn separated(e: &pointconf::PointSet) -> bool {
    e.min_separation() > 10.0 * 1e-9 * e.scale()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stars_meet_guarantee(
        n in 8usize..=40,
        k in 2usize..=3,
        w in prop::collection::vec(0.2..5.0f64, 3),
        seed in any::<u64>(),
        setting in 0usize..3,
    ) {
        let (mode, dim) = [(Mode::Distance, Dim::Two), (Mode::DotProduct, Dim::Two), (Mode::Distance, Dim::Three)][setting];
        let w = &w[..k];
        let e = star_set(n, k, w, dim, mode, seed).unwrap();
        prop_assert_eq!(e.len(), n);
        prop_assert!(separated(&e));
        let g = make_family(&FamilySpec::new(FamilyKind::Star(k), Weights::Explicit(w.to_vec()))).unwrap();
        let want = BigUint::from((n - 1) / k).pow(k as u32);
        prop_assert!(injective(&e, &g, mode) >= want);
    }

    #[test]
    fn trees_meet_guarantee(n in 8usize..=40, w in 0.2..5.0f64, seed in any::<u64>(), setting in 0usize..3) {
        let (mode, dim) = [(Mode::Distance, Dim::Two), (Mode::DotProduct, Dim::Two), (Mode::Distance, Dim::Three)][setting];
        let weights = Weights::Uniform(w);
        let e = tree_set(n, 2, 2, &weights, dim, mode, seed).unwrap();
        prop_assert!(separated(&e));
        let g = make_family(&FamilySpec::new(FamilyKind::PerfectTree { c: 2, h: 2 }, weights)).unwrap();
        let want = BigUint::from(n / 4).pow(4);
        let got = count_fast(&e, &g, &CountQuery::new(mode, Semantics::Injective)).unwrap().count;
        prop_assert!(got >= want);
    }

    #[test]
    fn triangles_meet_guarantee(n in 3usize..=40, a in 0.5..5.0f64, b in 0.5..5.0f64, c in 0.5..5.0f64, seed in any::<u64>()) {
        prop_assume!((a - b).abs() > 1e-3);
        let (e, alphas) = coincident_triangle_set(n, [a, b, c], seed).unwrap();
        prop_assert!(separated(&e));
        let g = make_family(&FamilySpec::new(FamilyKind::Cycle(3), Weights::Explicit(alphas.to_vec()))).unwrap();
        prop_assert!(injective(&e, &g, Mode::DotProduct) >= BigUint::from(n - 2));
    }

    #[test]
    fn scaled_stars_keep_their_counts(n in 8usize..=30, lambda in 0.3..4.0f64, seed in any::<u64>()) {
        let w = [1.0, 2.5];
        let e = star_set(n, 2, &w, Dim::Two, Mode::Distance, seed).unwrap();
        let g = make_family(&FamilySpec::new(FamilyKind::Star(2), Weights::Explicit(w.to_vec()))).unwrap();
        let scaled_e = pointconf::PointSet::new(Dim::Two, e.points().iter().map(|p| p.scale(lambda)).collect()).unwrap();
        let scaled_g = WeightedGraph::new(3, g.edges().iter().map(|x| Edge { w: x.w * lambda, ..*x }).collect()).unwrap();
        prop_assert_eq!(injective(&scaled_e, &scaled_g, Mode::Distance), injective(&e, &g, Mode::Distance));
    }
}
