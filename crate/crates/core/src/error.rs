use thiserror::Error;

use crate::geom_kernel::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("ray origin equals its through point")]
    DegenerateRay,
    #[error("ray leaves the polygon without a boundary hit")]
    NoHit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("vertices {0}, {1}, {2} are collinear")]
    CollinearRun(usize, usize, usize),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(usize),
    #[error("segment is not a chord of the polygon")]
    NotAChord,
    #[error("point {0:?} lies outside the polygon")]
    PointOutside(Box<Point>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardError {
    #[error("primary {primary}: vertex {vertex} has no blocking edge that fits A or C")]
    UnclassifiableVertex { primary: String, vertex: String },
    #[error("iteration marked no target (primary {0})")]
    NonTermination(String),
    #[error("no parent guard covers the residual cell at {0:?}")]
    IrreparableCell(Box<Point>),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, above the exhaustive-search cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("point {0:?} lies outside the polygon")]
    PointOutside(Box<Point>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}
