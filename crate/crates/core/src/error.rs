use thiserror::Error;

use crate::geom::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("generator {index} has radius {radius}; flowers are built from unit disks")]
    NonUnitGenerator { index: usize, radius: f64 },
    #[error("bounding box is degenerate")]
    EmptyBox,
    #[error("grid resolution {0} is below the minimum of 16")]
    ResolutionTooLow(usize),
    #[error("grid geometry mismatch")]
    GridMismatch,
    #[error("region is empty")]
    EmptyRegion,
    #[error("input region is not spindle convex")]
    NotSpindleConvex,
    #[error("point {0} lies outside the domain")]
    OutsideDomain(Point),
    #[error("flower is not reduced along its boundary")]
    NotReduced,
    #[error("center is not an interior point of the spindle kernel")]
    BadCenter,
    #[error("family needs at least 3 members, got {0}")]
    TooSmall(usize),
    #[error("domain diameter {0} exceeds 2")]
    DiameterExceeded(f64),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid flower expression: {0}")]
    InvalidFlower(String),
    #[error("{pointer}: {message}")]
    Scene { pointer: String, message: String },
    #[error("{pointer}: {value} is outside [{min}, {max}]")]
    OutOfRange { pointer: String, value: f64, min: f64, max: f64 },
}
