//! Vertex guards for simple polygons: window partition by link distance,
//! primary-vertex guard placement, and exact oracles for verification.

pub mod error;
pub mod geom_kernel;
pub mod guard_placement;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod polygon;
pub mod properties;
pub mod shortest_paths;
pub mod visibility;

pub use error::{GeomError, GuardError, IoError, OracleError, PolygonError};
pub use geom_kernel::{orient, Orientation, Point, Rational, Segment};
pub use polygon::{BoundaryPoint, BoundaryRange, Chord, Direction, Polygon, Ring};

/// What a guard set has to see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Vertices,
    Boundary,
    Interior,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Vertices => "vertices",
            Mode::Boundary => "boundary",
            Mode::Interior => "interior",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vertices" => Ok(Mode::Vertices),
            "boundary" => Ok(Mode::Boundary),
            "interior" => Ok(Mode::Interior),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}
