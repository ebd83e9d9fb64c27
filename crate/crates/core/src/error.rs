use thiserror::Error;

use crate::drawing::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("degenerate geometry ({reason}): {elements}")]
    Degenerate { reason: &'static str, elements: String },

    #[error("invalid drawing structure: {0}")]
    Structure(String),

    #[error("rotation system is not planar: faces - segments + nodes = {euler}, expected 2")]
    NonPlanar { euler: i64 },

    #[error("inconsistent side classification for triangle {triangle:?}")]
    InconsistentSides { triangle: [usize; 3] },

    #[error("edge {edge} changed its k-value from {parent} to {child} under vertex deletion")]
    KValueJump { edge: Edge, parent: usize, child: usize },

    #[error("vertex {0} is not in the drawing")]
    UnknownVertex(usize),

    #[error("face {0} is not a face of the drawing")]
    UnknownFace(usize),

    #[error("cannot delete vertex {vertex}: the drawing would have fewer than 3 vertices")]
    TooSmall { vertex: usize },

    #[error("vertex {vertex} is not incident to face {face}")]
    NotOnFace { vertex: usize, face: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("drawing has no geometry")]
    NoGeometry,

    #[error("generator failed: {0}")]
    Generator(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
