//! Analysis of good drawings of complete graphs: k-edges relative to a
//! reference face, invariant edges under vertex deletion, and certificates for
//! seq-shellability and bishellability.

pub mod deletion;
pub mod document;
pub mod drawing;
pub mod error;
pub mod faces;
pub mod generators;
pub mod geom;
pub mod goodness;
pub mod kedges;
mod planarize;
pub mod shellability;
pub mod svg;
pub mod vset;

pub use deletion::{delete_vertex, face_containing, FaceMap};
pub use document::load_drawing;
pub use drawing::{Dart, Drawing, Edge, NodeId, NodeKind, SegmentId, Vertex};
pub use error::{Error, Result};
pub use faces::{trace_faces, vertices_on_face, FaceId, FaceSet};
pub use goodness::{validate_goodness, ValidationReport};
pub use vset::VertexSet;
