use pointconf::graphs::{
    family_memberships, find_best_cover, find_best_cover_with_limit, make_family, max_matching, recognize,
    FamilyKind, FamilySpec, FamilyTag,
};
use pointconf::verify::{cover_is_valid, cover_oracle, matching_oracle, random_graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![
        (2usize..=50).prop_map(FamilyKind::Path),
        (3usize..=50).prop_map(FamilyKind::Cycle),
        (2usize..=49).prop_map(FamilyKind::Star),
        (2usize..=7, 0usize..=5)
            .prop_filter("at most 50 vertices", |&(c, h)| pointconf::graphs::tree_size(c, h) <= 50)
            .prop_map(|(c, h)| FamilyKind::PerfectTree { c, h }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cover_matches_oracle(seed in any::<u64>(), n in 1usize..=12, p in 0.05..0.5f64) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let c = find_best_cover(&g).unwrap();
        prop_assert!(cover_is_valid(&g, &c));
        prop_assert_eq!(&c.exponent, &cover_oracle(&g));
        if c.is_full() {
            prop_assert_eq!(2 * c.s + 3 * c.t, n);
        }
        prop_assert!(c.exponent <= num_rational::BigRational::from_integer(n.into()));
    }

    #[test]
    fn matching_matches_oracle(seed in any::<u64>(), n in 1usize..=12, p in 0.05..0.6f64) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let m = max_matching(&g).unwrap();
        prop_assert_eq!(m.m, matching_oracle(&g));
        prop_assert_eq!(m.edges.len(), m.m);
        prop_assert_eq!(m.r, n - 2 * m.m);
        let mut used = vec![false; n];
        for &e in &m.edges {
            let edge = g.edges()[e];
            prop_assert!(!used[edge.u] && !used[edge.v]);
            used[edge.u] = true;
            used[edge.v] = true;
        }
    }

    #[test]
    fn recognition_inverts_construction(kind in family(), w in 0.1..10.0f64) {
        let g = make_family(&FamilySpec::uniform(kind, w)).unwrap();
        let r = recognize(&g);
        prop_assert!(r.uniform);
        match kind {
            FamilyKind::PerfectTree { h: 0, .. } => prop_assert_eq!(r.tag, FamilyTag::Single),
            _ => prop_assert!(family_memberships(&g).contains(&kind)),
        }
    }
}

#[test]
fn path_covers_alternate_between_edges_and_hinges() {
    for k in 2..=30 {
        let g = make_family(&FamilySpec::uniform(FamilyKind::Path(k), 1.0)).unwrap();
        let c = find_best_cover_with_limit(&g, 30).unwrap();
        assert_eq!(c.exponent, num_rational::BigRational::new((2 * k).into(), 3.into()), "P{k}");
        assert!(c.is_full());
        if k <= 14 {
            assert_eq!(c.exponent, cover_oracle(&g), "P{k}");
        }
    }
}
