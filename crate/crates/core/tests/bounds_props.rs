use num_bigint::BigInt;
use num_rational::BigRational;
use pointconf::bounds::{
    binary_tree_dot_bound, binary_tree_formula, catalog, chain_bounds, tree_exponent, Exponent, Side,
};
use pointconf::graphs::{find_best_cover_with_limit, make_family, FamilyKind, FamilySpec};
use pointconf::verify::random_graph;
use pointconf::{Dim, Mode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

#[test]
fn recurrence_equals_closed_form() {
    for c in 2..=6 {
        for h in 0..=16 {
            let t = tree_exponent(c, h).unwrap();
            assert_eq!(t.recurrence, t.closed_form, "c={c} h={h}");
        }
    }
    for h in 0..=16 {
        assert_eq!(tree_exponent(2, h).unwrap().closed_form.value, binary_tree_formula(h), "h={h}");
    }
}

#[test]
fn binary_dot_bound_at_height_one_is_the_hinge_bound() {
    let (hinge, _) = chain_bounds(2, Mode::DotProduct, Dim::Two).unwrap();
    assert_eq!(binary_tree_dot_bound(1), hinge.value);
}

#[test]
fn path_cover_never_beats_chain_rule() {
    for k in 2..=30 {
        let g = make_family(&FamilySpec::uniform(FamilyKind::Path(k), 1.0)).unwrap();
        let cover = find_best_cover_with_limit(&g, 30).unwrap();
        for mode in [Mode::Distance, Mode::DotProduct] {
            let (chain, _) = chain_bounds(k - 1, mode, Dim::Two).unwrap();
            let cover = Exponent::new(cover.exponent.clone(), false, Side::Upper);
            assert_ne!(cover.cmp_level(&chain), Ordering::Less, "P{k} {mode}");
        }
    }
}

fn setting() -> impl Strategy<Value = (Mode, Dim)> {
    prop_oneof![
        Just((Mode::Distance, Dim::Two)),
        Just((Mode::DotProduct, Dim::Two)),
        Just((Mode::Distance, Dim::Three)),
        Just((Mode::DotProduct, Dim::Three)),
    ]
}

fn family() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![
        (2usize..=12).prop_map(FamilyKind::Path),
        (3usize..=12).prop_map(FamilyKind::Cycle),
        (2usize..=11).prop_map(FamilyKind::Star),
        Just(FamilyKind::PerfectTree { c: 2, h: 2 }),
        Just(FamilyKind::PerfectTree { c: 2, h: 3 }),
        Just(FamilyKind::PerfectTree { c: 3, h: 2 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn best_bounds_are_ordered_on_random_graphs(seed in any::<u64>(), n in 1usize..=12, p in 0.05..0.6f64, (mode, dim) in setting()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let r = catalog(&g, mode, dim).unwrap();
        let nv = Exponent::new(BigRational::from_integer(BigInt::from(n)), false, Side::Upper);
        prop_assert_ne!(r.best_upper.cmp_level(&nv), Ordering::Greater);
        if let Some(l) = &r.best_lower {
            prop_assert_ne!(l.cmp_level(&r.best_upper), Ordering::Greater);
        }
    }

    #[test]
    fn best_bounds_are_ordered_on_families(kind in family(), (mode, dim) in setting()) {
        let g = make_family(&FamilySpec::uniform(kind, 1.0)).unwrap();
        let r = catalog(&g, mode, dim).unwrap();
        let nv = Exponent::new(BigRational::from_integer(BigInt::from(g.vertex_count())), false, Side::Upper);
        prop_assert_ne!(r.best_upper.cmp_level(&nv), Ordering::Greater);
        if let Some(l) = &r.best_lower {
            prop_assert_ne!(l.cmp_level(&r.best_upper), Ordering::Greater, "{:?}", r);
        }
    }
}
