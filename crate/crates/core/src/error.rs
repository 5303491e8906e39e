use thiserror::Error;

/// Errors raised by surface construction, tracing and the renormalization operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("polygon with both side lengths zero")]
    NonPositiveShape,
    #[error("trajectory passes within tolerance of a vertex after {crossings} crossings")]
    VertexHit { crossings: usize },
    #[error("start point is not inside polygon {poly}")]
    StartOutside { poly: usize },
    #[error("labels {0} and {1} are not adjacent in a row of any transition diagram")]
    NotCoAdjacent(u32, u32),
    #[error("word is not admissible at position {position}")]
    NotAdmissible { position: usize },
    #[error("arrow word is not chained at position {position}")]
    NotChained { position: usize },
    #[error("interpolating path from {from} to {to} is not unique")]
    PathNotUnique { from: u32, to: u32 },
    #[error("no interpolating path from {from} to {to}")]
    PathMissing { from: u32, to: u32 },
    #[error("direction {0} is outside the standard sector")]
    DomainError(f64),
    #[error("orbit enters the endpoint quarantine band at step {step}")]
    BoundaryOrbit { step: usize },
    #[error("nested intervals stalled at width {width}")]
    NoConvergence { width: f64 },
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
