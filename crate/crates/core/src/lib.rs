//! Counting distance and dot-product configurations in finite point sets.
//!
//! A *configuration template* is an edge-weighted graph `G`. An assignment of
//! its vertices to points of a set `E` is a configuration when every edge's
//! weight equals the distance (or dot product) of its endpoints' points.
//!
//! * [`geometry`]: alpha-lines, circle and sphere intersections, tolerance predicates.
//! * [`graphs`]: templates, named families, best partial covers, maximum matchings.
//! * [`constructions`]: point sets rich in stars, trees and dot-product triangles.
//! * [`counting`]: brute-force and fast exact counters.
//! * [`bounds`]: the exponent catalog and the tree recurrence.
//! * [`harness`]: growth-rate experiments and log-log fitting.
//! * [`io`]: text formats for point sets, graphs and reports.

pub mod bounds;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod geometry;
pub mod graphs;
pub mod harness;
pub mod io;
pub mod verify;

pub use constructions::{Construction, ConstructionKind, ConstructionSpec, PointSet};
pub use counting::{CountQuery, CountResult, Method, Semantics};
pub use error::{Error, Result};
pub use geometry::{Dim, Mode, Point, Tolerance};
pub use graphs::{FamilyKind, FamilySpec, WeightedGraph, Weights};
