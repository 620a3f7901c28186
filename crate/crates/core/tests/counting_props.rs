use pointconf::constructions::PointSet;
use pointconf::counting::{count_bruteforce, count_fast, CountQuery, Semantics};
use pointconf::graphs::{Edge, WeightedGraph};
use pointconf::verify::random_small_instance;
use pointconf::{Dim, Mode, Point};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setting() -> impl Strategy<Value = (Mode, Dim)> {
    prop_oneof![
        Just((Mode::Distance, Dim::Two)),
        Just((Mode::DotProduct, Dim::Two)),
        Just((Mode::Distance, Dim::Three)),
        Just((Mode::DotProduct, Dim::Three)),
    ]
}

fn instance(seed: u64, mode: Mode, dim: Dim) -> (PointSet, WeightedGraph) {
    random_small_instance(&mut ChaCha8Rng::seed_from_u64(seed), mode, dim)
}

fn hom(e: &PointSet, g: &WeightedGraph, mode: Mode) -> num_bigint::BigUint {
    count_fast(e, g, &CountQuery::new(mode, Semantics::Homomorphism)).unwrap().count
}

fn map_points(e: &PointSet, f: impl Fn(&Point) -> Point) -> PointSet {
    PointSet::new(e.dim(), e.points().iter().map(f).collect()).unwrap()
}

/// Rotation taking the z-axis-free frame to one given by angles.
fn rotate(p: &Point, a: f64, b: f64) -> Point {
    let (x, y) = (p.x() * a.cos() - p.y() * a.sin(), p.x() * a.sin() + p.y() * a.cos());
    match p.dim() {
        Dim::Two => Point::new2(x, y),
        Dim::Three => {
            let (y2, z2) = (y * b.cos() - p.z() * b.sin(), y * b.sin() + p.z() * b.cos());
            Point::new3(x, y2, z2)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_matches_bruteforce(seed in any::<u64>(), (mode, dim) in setting()) {
        let (e, g) = instance(seed, mode, dim);
        for semantics in [Semantics::Homomorphism, Semantics::Injective] {
            let q = CountQuery::new(mode, semantics);
            prop_assert_eq!(count_fast(&e, &g, &q).unwrap().count, count_bruteforce(&e, &g, &q).unwrap().count);
        }
    }

    #[test]
    fn injective_at_most_homomorphism(seed in any::<u64>(), (mode, dim) in setting()) {
        let (e, g) = instance(seed, mode, dim);
        let inj = count_bruteforce(&e, &g, &CountQuery::new(mode, Semantics::Injective)).unwrap().count;
        prop_assert!(inj <= hom(&e, &g, mode));
    }

    #[test]
    fn rigid_motions_preserve_counts(
        seed in any::<u64>(),
        (mode, dim) in setting(),
        a in 0.0..6.3f64,
        b in 0.0..6.3f64,
        shift in prop::array::uniform3(-5.0..5.0f64),
    ) {
        let (e, g) = instance(seed, mode, dim);
        let before = hom(&e, &g, mode);
        let moved = map_points(&e, |p| {
            let r = rotate(p, a, b);
            match mode {
                Mode::DotProduct => r,
                Mode::Distance => {
                    let t = match dim {
                        Dim::Two => Point::new2(shift[0], shift[1]),
                        Dim::Three => Point::new3(shift[0], shift[1], shift[2]),
                    };
                    r.add(&t)
                }
            }
        });
        prop_assert_eq!(hom(&moved, &g, mode), before);
    }

    #[test]
    fn scaling_is_covariant(seed in any::<u64>(), (mode, dim) in setting(), lambda in 0.3..4.0f64) {
        let (e, g) = instance(seed, mode, dim);
        let factor = match mode {
            Mode::Distance => lambda,
            Mode::DotProduct => lambda * lambda,
        };
        let scaled_g = WeightedGraph::new(
            g.vertex_count(),
            g.edges().iter().map(|e| Edge { w: e.w * factor, ..*e }).collect(),
        )
        .unwrap();
        let scaled_e = map_points(&e, |p| p.scale(lambda));
        prop_assert_eq!(hom(&scaled_e, &scaled_g, mode), hom(&e, &g, mode));
    }

    #[test]
    fn point_order_is_irrelevant(seed in any::<u64>(), (mode, dim) in setting(), shuffle_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let (e, g) = instance(seed, mode, dim);
        let mut pts = e.points().to_vec();
        pts.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let shuffled = PointSet::new(dim, pts).unwrap();
        prop_assert_eq!(hom(&shuffled, &g, mode), hom(&e, &g, mode));
        let q = CountQuery::new(mode, Semantics::Injective);
        prop_assert_eq!(count_fast(&shuffled, &g, &q).unwrap().count, count_fast(&e, &g, &q).unwrap().count);
    }

    #[test]
    fn adding_points_never_decreases(seed in any::<u64>(), (mode, dim) in setting(), extra in prop::array::uniform3(-3i32..=3)) {
        let (e, g) = instance(seed, mode, dim);
        let p = match dim {
            Dim::Two => Point::new2(extra[0] as f64, extra[1] as f64),
            Dim::Three => Point::new3(extra[0] as f64, extra[1] as f64, extra[2] as f64),
        };
        prop_assume!(!e.points().contains(&p));
        let mut bigger = e.clone();
        bigger.push(p).unwrap();
        prop_assert!(hom(&bigger, &g, mode) >= hom(&e, &g, mode));
        let q = CountQuery::new(mode, Semantics::Injective);
        prop_assert!(count_fast(&bigger, &g, &q).unwrap().count >= count_fast(&e, &g, &q).unwrap().count);
    }
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    use pointconf::constructions::tree_set;
    use pointconf::graphs::{make_family, FamilyKind, FamilySpec, Weights};
    let e = tree_set(200, 2, 2, &Weights::Uniform(1.0), Dim::Two, Mode::Distance, 4).unwrap();
    let g = WeightedGraph::from_triples(
        4,
        &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)],
    )
    .unwrap();
    let t = make_family(&FamilySpec::uniform(FamilyKind::PerfectTree { c: 2, h: 2 }, 1.0)).unwrap();
    let run = |threads: usize, g: &WeightedGraph, s: Semantics| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| count_fast(&e, g, &CountQuery::new(Mode::Distance, s)).unwrap().count)
    };
    for (g, s) in [(&g, Semantics::Homomorphism), (&t, Semantics::Homomorphism), (&g, Semantics::Injective)] {
        let one = run(1, g, s);
        assert_eq!(run(4, g, s), one);
        assert_eq!(run(7, g, s), one);
    }
}
