//! Delaunay triangulation and convex hull of planar points by sorted
//! incremental insertion, with exact predicate counts.
//!
//! Points are sorted lexicographically once, then inserted left to right.
//! Each insertion walks the hull from its rightmost vertex to find the two
//! tangents and, for the triangulation, flips away every boundary edge whose
//! circumcircle contains the new point.
//!
//! ```
//! use sorted_delaunay::{triangulate, Point2};
//!
//! let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point2::from);
//! let t = triangulate(&pts).unwrap();
//! assert_eq!(t.original_triangles(), vec![[0, 1, 3], [1, 2, 3]]);
//! ```

pub mod delaunay;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod io;
pub mod verify;

pub use delaunay::{triangulate, EdgeKey, Triangulation, TriangulationMap, Triangulator};
pub use error::{Error, Result};
pub use geometry::{in_circle_opposite, to_left, OpCounters, Orientation, Point2};
pub use hull::{convex_hull, sort_points, CollinearPolicy, Hull, HullChain, PointSet};
pub use verify::{verify_triangulation, VerificationReport};
