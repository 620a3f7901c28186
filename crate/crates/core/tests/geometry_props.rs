use pointconf::geometry::{
    circle_circle, classify_alpha_lines, sphere_triple, CircleIntersection, LinePairClass, SphereIntersection,
};
use pointconf::{Point, Tolerance};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![-20.0..-0.05f64, 0.05..20.0f64]
}

fn point2() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_filter("away from the origin", |(x, y)| x.hypot(*y) > 0.1).prop_map(|(x, y)| Point::new2(x, y))
}

fn point3() -> impl Strategy<Value = Point> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point::new3(x, y, z))
}

fn same_set(a: &[Point], b: &[Point], slack: f64) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| p.dist(q) <= slack))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn distinct_radial_lines_meet_once(p in point2(), r in point2(), a in nonzero(), b in nonzero()) {
        let det = p.x() * r.y() - p.y() * r.x();
        prop_assume!(det.abs() > 1e-3 * p.norm() * r.norm());
        let tol = Tolerance::default();
        match classify_alpha_lines(&p, a, &r, b, tol).unwrap() {
            LinePairClass::UniquePoint(q) => {
                // Residuals relative to the conditioning of the 2x2 solve.
                let cond = p.norm() * r.norm() / det.abs();
                let bound = 1e-9 * a.abs().max(b.abs()).max(1.0) * cond;
                prop_assert!((p.dot(&q) - a).abs() <= bound);
                prop_assert!((r.dot(&q) - b).abs() <= bound);
            }
            other => prop_assert!(false, "expected a unique point, got {:?}", other),
        }
    }

    #[test]
    fn coincidence_characterization(p in point2(), a in nonzero(), lambda in nonzero(), bump in 0.01..10.0f64) {
        let tol = Tolerance::default();
        let r = p.scale(lambda);
        let is_coincident = matches!(classify_alpha_lines(&p, a, &r, lambda * a, tol).unwrap(), LinePairClass::Coincident(_));
        prop_assert!(is_coincident);
        let is_disjoint =
            matches!(classify_alpha_lines(&p, a, &r, lambda * a * (1.0 + bump), tol).unwrap(), LinePairClass::ParallelDisjoint);
        prop_assert!(is_disjoint);
    }

    #[test]
    fn antipodal_lines_are_disjoint(p in point2(), a in nonzero()) {
        let class = classify_alpha_lines(&p, a, &p.scale(-1.0), a, Tolerance::default()).unwrap();
        prop_assert_eq!(class, LinePairClass::ParallelDisjoint);
    }

    #[test]
    fn circle_intersection_is_symmetric(c1 in point2(), c2 in point2(), r1 in 0.1..60.0f64, r2 in 0.1..60.0f64) {
        let tol = Tolerance::default();
        let ab = circle_circle(&c1, r1, &c2, r2, tol).unwrap();
        let ba = circle_circle(&c2, r2, &c1, r1, tol).unwrap();
        match (&ab, &ba) {
            (CircleIntersection::Points(x), CircleIntersection::Points(y)) => {
                let scale = c1.max_abs().max(c2.max_abs()).max(r1).max(r2);
                // Near-tangent pairs may split into two close points on one side only.
                if x.len() == y.len() {
                    prop_assert!(same_set(x, y, 1e-6 * scale));
                }
                for q in x.iter().chain(y) {
                    prop_assert!((q.dist(&c1) - r1).abs() <= 1e-6 * scale);
                    prop_assert!((q.dist(&c2) - r2).abs() <= 1e-6 * scale);
                }
            }
            _ => prop_assert_eq!(ab, ba),
        }
    }

    #[test]
    fn circle_points_have_small_residuals(c1 in point2(), c2 in point2(), q in point2()) {
        // Circles through a common point off the line of centers cross transversally.
        let (r1, r2) = (q.dist(&c1), q.dist(&c2));
        let u = c2.sub(&c1);
        let v = q.sub(&c1);
        prop_assume!(r1 > 0.1 && r2 > 0.1 && (u.x() * v.y() - u.y() * v.x()).abs() > 1e-2 * u.norm() * v.norm());
        let tol = Tolerance::default();
        match circle_circle(&c1, r1, &c2, r2, tol).unwrap() {
            CircleIntersection::Points(xs) => {
                prop_assert_eq!(xs.len(), 2);
                prop_assert!(xs.iter().any(|x| x.dist(&q) <= 1e-6 * 100.0));
                for x in xs {
                    prop_assert!(tol.close(x.dist(&c1), r1));
                    prop_assert!(tol.close(x.dist(&c2), r2));
                }
            }
            other => prop_assert!(false, "expected two points, got {:?}", other),
        }
    }

    #[test]
    fn sphere_triple_is_permutation_invariant(
        target in point3(),
        c in prop::array::uniform3(point3()),
        perm in 0usize..6,
    ) {
        // Spheres through a common point always meet.
        let radii = [target.dist(&c[0]), target.dist(&c[1]), target.dist(&c[2])];
        prop_assume!(radii.iter().all(|&r| r > 0.5));
        prop_assume!(c[1].sub(&c[0]).cross(&c[2].sub(&c[0])).norm() > 1.0);
        let order = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let tol = Tolerance::default();
        let base = sphere_triple(&c, &radii, tol).unwrap();
        let shuffled = sphere_triple(
            &[c[order[0]], c[order[1]], c[order[2]]],
            &[radii[order[0]], radii[order[1]], radii[order[2]]],
            tol,
        )
        .unwrap();
        match (&base, &shuffled) {
            (SphereIntersection::Points(x), SphereIntersection::Points(y)) => {
                prop_assert!(x.iter().any(|q| q.dist(&target) <= 1e-5 * 50.0));
                if x.len() == y.len() {
                    prop_assert!(same_set(x, y, 1e-5 * 50.0));
                } else {
                    // A near-tangent pair collapses to one point on one side.
                    prop_assert!(x.iter().chain(y).all(|q| q.dist(&target) <= 1e-3 * 50.0));
                }
            }
            _ => prop_assert!(false, "expected points, got {:?} and {:?}", base, shuffled),
        }
    }
}
