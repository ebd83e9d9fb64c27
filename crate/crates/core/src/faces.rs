//! Face tracing on the rotation system.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::drawing::{Dart, Drawing, NodeKind, SegmentId, Vertex};
use crate::error::{Error, Result};
use crate::vset::VertexSet;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub u32);

impl FaceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Faces of a drawing on the sphere. Each face is the boundary walk that keeps
/// it on the left; no face is distinguished as outer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    faces: Vec<Vec<Dart>>,
    dart_face: Vec<FaceId>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len() as u32).map(FaceId)
    }

    pub fn contains(&self, f: FaceId) -> bool {
        f.index() < self.faces.len()
    }

    pub fn boundary(&self, f: FaceId) -> &[Dart] {
        &self.faces[f.index()]
    }

    /// The face on the left of a dart.
    pub fn left_of(&self, d: Dart) -> FaceId {
        self.dart_face[d.index()]
    }

    /// Faces on the left and on the right of a segment's forward dart.
    pub fn segment_sides(&self, s: SegmentId) -> (FaceId, FaceId) {
        (self.left_of(Dart::forward(s)), self.left_of(Dart::backward(s)))
    }

    pub(crate) fn check(&self, f: FaceId) -> Result<()> {
        if self.contains(f) {
            Ok(())
        } else {
            Err(Error::UnknownFace(f.index()))
        }
    }
}

/// Traces the orbits of the face-successor permutation and checks Euler's
/// formula for the sphere.
pub fn trace_faces(d: &Drawing) -> Result<FaceSet> {
    const UNSET: FaceId = FaceId(u32::MAX);
    let darts = d.dart_count();
    let mut dart_face = vec![UNSET; darts];
    let mut faces = Vec::new();
    for start in 0..darts as u32 {
        if dart_face[start as usize] != UNSET {
            continue;
        }
        let id = FaceId(faces.len() as u32);
        let mut walk = Vec::new();
        let mut cur = Dart(start);
        loop {
            if dart_face[cur.index()] != UNSET {
                return Err(Error::Structure("face successor is not a permutation".into()));
            }
            dart_face[cur.index()] = id;
            walk.push(cur);
            cur = d.face_successor(cur);
            if cur == Dart(start) {
                break;
            }
        }
        faces.push(walk);
    }
    let euler = faces.len() as i64 - d.segment_count() as i64 + d.node_count() as i64;
    if euler != 2 {
        return Err(Error::NonPlanar { euler });
    }
    Ok(FaceSet { faces, dart_face })
}

/// Vertices on the boundary walk of a face.
pub fn vertices_on_face(d: &Drawing, fs: &FaceSet, f: FaceId) -> Result<BTreeSet<Vertex>> {
    Ok(vertex_set_on_face(d, fs, f)?.iter().collect())
}

pub fn vertex_set_on_face(d: &Drawing, fs: &FaceSet, f: FaceId) -> Result<VertexSet> {
    fs.check(f)?;
    Ok(fs
        .boundary(f)
        .iter()
        .filter_map(|&dart| match d.node_kind(d.tail(dart)) {
            NodeKind::Vertex(v) => Some(v),
            NodeKind::Crossing(..) => None,
        })
        .collect())
}

/// Signed area of a face's boundary walk in the plane (negative for the
/// unbounded face, which is walked clockwise).
pub fn face_area(d: &Drawing, fs: &FaceSet, f: FaceId) -> Result<f64> {
    let g = d.geometry().ok_or(Error::NoGeometry)?;
    fs.check(f)?;
    let mut twice = 0.0;
    for &dart in fs.boundary(f) {
        let path = g.dart_path(d, dart);
        for w in path.windows(2) {
            twice += w[0][0] * w[1][1] - w[1][0] * w[0][1];
        }
    }
    Ok(twice / 2.0)
}

/// Boundary polygon of a face as a closed point list (the start point is not repeated).
pub fn face_polygon(d: &Drawing, fs: &FaceSet, f: FaceId) -> Result<Vec<[f64; 2]>> {
    let g = d.geometry().ok_or(Error::NoGeometry)?;
    fs.check(f)?;
    let mut pts = Vec::new();
    for &dart in fs.boundary(f) {
        let path = g.dart_path(d, dart);
        pts.extend_from_slice(&path[..path.len() - 1]);
    }
    Ok(pts)
}

/// The unbounded face of a geometric drawing.
pub fn unbounded_face(d: &Drawing, fs: &FaceSet) -> Result<FaceId> {
    let mut best = None;
    for f in fs.ids() {
        let a = face_area(d, fs, f)?;
        if best.is_none_or(|(_, b)| a < b) {
            best = Some((f, a));
        }
    }
    Ok(best.expect("a drawing has at least two faces").0)
}

/// The face of a geometric drawing containing a point that lies on no edge.
pub fn face_at_point(d: &Drawing, fs: &FaceSet, x: f64, y: f64) -> Result<FaceId> {
    let outer = unbounded_face(d, fs)?;
    let mut hit = None;
    for f in fs.ids().filter(|&f| f != outer) {
        let poly = face_polygon(d, fs, f)?;
        if winding_f64(&poly, [x, y]) != 0 {
            if hit.is_some() {
                return Err(Error::OutOfRange(format!(
                    "point ({x}, {y}) lies in more than one face"
                )));
            }
            hit = Some(f);
        }
    }
    Ok(hit.unwrap_or(outer))
}

fn winding_f64(poly: &[[f64; 2]], p: [f64; 2]) -> i64 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let side = (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= p[1] {
            if b[1] > p[1] && side > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}
