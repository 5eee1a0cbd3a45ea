use thiserror::Error;

use crate::delaunay::EdgeKey;

/// Errors produced by the construction and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no input points")]
    EmptyInput,

    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },

    #[error("need at least 3 distinct points, got {0}")]
    TooFewPoints(usize),

    #[error("all {0} points are collinear")]
    AllCollinear(usize),

    #[error("edge endpoints coincide")]
    DegenerateEdge,

    #[error("query point and opposite vertex are not on opposite sides of the edge")]
    OppositeSideViolation,

    #[error("triangulation map is inconsistent at edge {0}")]
    MapInconsistency(EdgeKey),

    #[error("edge {0} is not in the map")]
    MissingEdge(EdgeKey),

    #[error("vertex {vertex} is not opposite to edge {edge}")]
    MissingOpposite { edge: EdgeKey, vertex: usize },

    #[error("tangent search did not terminate for point {0}")]
    TangentSearch(usize),

    #[error("reference triangle is degenerate")]
    CollinearTriangle,

    #[error("brute-force oracle limited to {limit} points, got {n}")]
    TooLarge { n: usize, limit: usize },
}

impl Error {
    /// True for errors caused by a point set that admits no proper polygon
    /// or triangulation, as opposed to malformed input or internal faults.
    pub fn is_degenerate_input(&self) -> bool {
        matches!(self, Error::TooFewPoints(_) | Error::AllCollinear(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
