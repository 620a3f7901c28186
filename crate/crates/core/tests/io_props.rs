use pointconf::constructions::PointSet;
use pointconf::graphs::{Edge, WeightedGraph};
use pointconf::io::{format_graph, format_points, parse_graph, parse_points, read_points, write_points};
use pointconf::{Dim, Point};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e6..1e6f64]
}

proptest! {
    #[test]
    fn points_round_trip_exactly(coords in prop::collection::vec(prop::array::uniform3(value()), 1..30), three in any::<bool>()) {
        let dim = if three { Dim::Three } else { Dim::Two };
        let pts = coords
            .iter()
            .map(|c| if three { Point::new3(c[0], c[1], c[2]) } else { Point::new2(c[0], c[1]) })
            .collect();
        let set = PointSet::new(dim, pts).unwrap();
        let back = parse_points(&format_points(&set)).unwrap();
        for (a, b) in set.points().iter().zip(back.points()) {
            for (x, y) in a.coords().iter().zip(b.coords()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn graphs_round_trip_exactly(ws in prop::collection::vec(value().prop_filter("nonzero", |w| *w != 0.0), 1..10)) {
        let k = ws.len() + 1;
        let g = WeightedGraph::new(k, ws.iter().enumerate().map(|(i, &w)| Edge { u: i, v: i + 1, w }).collect()).unwrap();
        let back = parse_graph(&format_graph(&g)).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let set = PointSet::new(Dim::Two, vec![Point::new2(0.1 + 0.2, 1.0 / 7.0)]).unwrap();
    write_points(&path, &set).unwrap();
    assert_eq!(read_points(&path).unwrap(), set);
}
