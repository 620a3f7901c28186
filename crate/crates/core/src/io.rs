//! Plain-text formats.
//!
//! Point file: a header `d n`, then `n` lines of `d` coordinates.
//! Graph file: a header `V E`, then `E` lines `u v w`.
//! Blank lines and lines starting with `#` are ignored. Numbers are written
//! in the shortest form that parses back to the identical `f64`.

use crate::constructions::PointSet;
use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::graphs::{Edge, WeightedGraph};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn field<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} `{tok}`") })
}

fn expect_len(fields: &[&str], n: usize, line: usize) -> Result<()> {
    if fields.len() != n {
        return Err(Error::Parse { line, msg: format!("expected {n} fields, found {}", fields.len()) });
    }
    Ok(())
}

pub fn format_points(points: &PointSet) -> String {
    let mut s = format!("{} {}\n", points.dim().get(), points.len());
    for p in points.points() {
        let coords: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
        s.push_str(&coords.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    expect_len(&header, 2, hl)?;
    let d: usize = field(header[0], hl, "dimension")?;
    let n: usize = field(header[1], hl, "point count")?;
    let dim = Dim::new(d)?;
    let mut pts = Vec::with_capacity(n);
    for (line, fields) in lines.by_ref().take(n) {
        expect_len(&fields, d, line)?;
        let coords = fields.iter().map(|t| field::<f64>(t, line, "coordinate")).collect::<Result<Vec<_>>>()?;
        pts.push(Point::from_slice(&coords)?);
    }
    if pts.len() != n {
        return Err(Error::Parse { line: hl, msg: format!("header promises {n} points, found {}", pts.len()) });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "trailing data".into() });
    }
    PointSet::new(dim, pts)
}

pub fn format_graph(g: &WeightedGraph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {:?}", e.u, e.v, e.w);
    }
    s
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    expect_len(&header, 2, hl)?;
    let v: usize = field(header[0], hl, "vertex count")?;
    let m: usize = field(header[1], hl, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, fields) in lines.by_ref().take(m) {
        expect_len(&fields, 3, line)?;
        edges.push(Edge {
            u: field(fields[0], line, "vertex")?,
            v: field(fields[1], line, "vertex")?,
            w: field(fields[2], line, "weight")?,
        });
    }
    if edges.len() != m {
        return Err(Error::Parse { line: hl, msg: format!("header promises {m} edges, found {}", edges.len()) });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "trailing data".into() });
    }
    WeightedGraph::new(v, edges)
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_points(&std::fs::read_to_string(path)?)
}

pub fn write_points(path: impl AsRef<Path>, points: &PointSet) -> Result<()> {
    Ok(std::fs::write(path, format_points(points))?)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    Ok(std::fs::write(path, format_graph(g))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip() {
        let ps = PointSet::new(
            Dim::Two,
            vec![Point::new2(0.1, -1.0 / 3.0), Point::new2(1e-300, 123456789.12345679)],
        )
        .unwrap();
        let back = parse_points(&format_points(&ps)).unwrap();
        assert_eq!(back, ps);
    }

    #[test]
    fn graph_round_trip() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 0.7), (1, 2, 2.0f64.sqrt())]).unwrap();
        assert_eq!(parse_graph(&format_graph(&g)).unwrap().edges(), g.edges());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_points("2 2\n0 0\n1 x\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "bad coordinate `x`".into() });
        assert!(matches!(parse_graph("3 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_points("2 1\n0 0\n1 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_graph("# comment\n2 1\n\n0 1 1.5\n").is_ok());
    }
}
