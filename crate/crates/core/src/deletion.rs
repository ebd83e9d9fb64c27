//! Vertex deletion with face-merge tracking.
//!
//! Removing a vertex removes its edges. Crossings on removed edges disappear,
//! so the surviving edge through such a crossing is smoothed into one longer
//! segment. Faces never split under deletion, only merge, so every face of the
//! parent lies inside exactly one face of the child.

use std::collections::{BTreeMap, BTreeSet};

use crate::drawing::{Dart, Drawing, DrawingParts, Edge, NodeId, NodeKind, RawGeometry, Vertex};
use crate::error::{Error, Result};
use crate::faces::{trace_faces, FaceId, FaceSet};

/// Sends every face of a parent drawing to the child face that contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMap {
    map: Vec<FaceId>,
}

impl FaceMap {
    pub fn identity(faces: usize) -> Self {
        FaceMap {
            map: (0..faces as u32).map(FaceId).collect(),
        }
    }

    pub fn apply(&self, f: FaceId) -> FaceId {
        self.map[f.index()]
    }

    /// Number of parent faces.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The map of two successive deletions: first `self`, then `next`.
    #[must_use]
    pub fn then(&self, next: &FaceMap) -> FaceMap {
        FaceMap {
            map: self.map.iter().map(|&f| next.apply(f)).collect(),
        }
    }
}

/// The child face containing parent face `f`.
pub fn face_containing(map: &FaceMap, f: FaceId) -> Result<FaceId> {
    map.map.get(f.index()).copied().ok_or(Error::UnknownFace(f.index()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Deletes vertex `v` and returns the child drawing, its faces and the map
/// from parent faces to child faces.
pub fn delete_vertex(d: &Drawing, fs: &FaceSet, v: Vertex) -> Result<(Drawing, FaceSet, FaceMap)> {
    if !d.has_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    if d.n() <= 3 {
        return Err(Error::TooSmall { vertex: v });
    }

    let kept_node = |x: NodeId| match d.node_kind(x) {
        NodeKind::Vertex(w) => w != v,
        NodeKind::Crossing(e, f) => !e.has(v) && !f.has(v),
    };
    let mut raw_of: Vec<Option<usize>> = vec![None; d.node_count()];
    let mut nodes = Vec::new();
    for (i, &kind) in d.nodes().iter().enumerate() {
        if kept_node(NodeId(i as u32)) {
            raw_of[i] = Some(nodes.len());
            nodes.push(kind);
        }
    }
    let raw = |x: NodeId| NodeId(raw_of[x.0 as usize].expect("kept node") as u32);

    let surviving: Vec<Edge> = d.edges().filter(|e| !e.has(v)).collect();
    let mut chains = BTreeMap::new();
    // Position of each kept node on each surviving edge's filtered chain.
    let mut position: BTreeMap<(NodeId, Edge), usize> = BTreeMap::new();
    let mut filtered: BTreeMap<Edge, Vec<NodeId>> = BTreeMap::new();
    for &e in &surviving {
        let kept: Vec<NodeId> = d.chain_nodes(e).into_iter().filter(|&x| kept_node(x)).collect();
        for (k, &x) in kept.iter().enumerate() {
            position.insert((x, e), k);
        }
        chains.insert(e, kept.iter().map(|&x| raw(x)).collect());
        filtered.insert(e, kept);
    }

    let mut rotation = vec![Vec::new(); nodes.len()];
    for (i, slot) in raw_of.iter().enumerate() {
        let Some(r) = *slot else { continue };
        let x = NodeId(i as u32);
        for &dart in d.rotation(x) {
            let e = d.dart_edge(dart);
            if e.has(v) {
                continue;
            }
            let chain = &filtered[&e];
            let k = position[&(x, e)];
            let nb = if dart.is_forward() { chain[k + 1] } else { chain[k - 1] };
            rotation[r].push((e, raw(nb)));
        }
    }

    let geometry = d.geometry().map(|g| {
        let mut vertex_pos = g.vertex_pos.clone();
        vertex_pos.remove(&v);
        let polylines = g
            .polylines
            .iter()
            .filter(|(e, _)| !e.has(v))
            .map(|(&e, line)| (e, line.clone()))
            .collect();
        let mut node_pos = vec![[0.0; 2]; nodes.len()];
        for (i, slot) in raw_of.iter().enumerate() {
            if let Some(r) = *slot {
                node_pos[r] = g.node_pos[i];
            }
        }
        let mut bends = BTreeMap::new();
        for &e in &surviving {
            let mut current = Vec::new();
            let mut k = 0;
            for &s in d.chain(e) {
                current.extend_from_slice(&g.segment_bends[s.0 as usize]);
                let head = d.segment(s).head;
                if kept_node(head) {
                    bends.insert((e, k), std::mem::take(&mut current));
                    k += 1;
                } else {
                    current.push(g.node_pos[head.0 as usize]);
                }
            }
        }
        RawGeometry {
            vertex_pos,
            polylines,
            node_pos,
            bends,
        }
    });

    let parts = DrawingParts {
        nodes,
        chains,
        rotation,
        geometry,
    };
    let (child, new_id) = Drawing::assemble(parts)?;
    let child_faces = trace_faces(&child)?;

    // Faces separated only by removed segments end up in the same child face.
    let mut uf = UnionFind::new(fs.len());
    for e in d.edges().filter(|e| e.has(v)) {
        for &s in d.chain(e) {
            let (l, r) = fs.segment_sides(s);
            uf.union(l.index(), r.index());
        }
    }
    let mut class_face: BTreeMap<usize, FaceId> = BTreeMap::new();
    for &e in &surviving {
        let parent_segments = d.chain(e);
        let child_segments = child.chain(e);
        let kept = &filtered[&e];
        // The first parent segment of each child segment.
        let mut first = Vec::with_capacity(child_segments.len());
        let mut k = 0;
        for &s in parent_segments {
            if k < kept.len() && d.segment(s).tail == kept[k] {
                first.push(s);
                k += 1;
            }
        }
        for (&ps, &cs) in first.iter().zip(child_segments) {
            for (pd, cd) in [
                (Dart::forward(ps), Dart::forward(cs)),
                (Dart::backward(ps), Dart::backward(cs)),
            ] {
                let class = uf.find(fs.left_of(pd).index());
                let face = child_faces.left_of(cd);
                if *class_face.entry(class).or_insert(face) != face {
                    return Err(Error::Structure(format!(
                        "deleting vertex {v} merges faces inconsistently"
                    )));
                }
            }
        }
    }
    let mut map = Vec::with_capacity(fs.len());
    for f in fs.ids() {
        let class = uf.find(f.index());
        let face = class_face
            .get(&class)
            .copied()
            .ok_or_else(|| Error::Structure(format!("face {f} has no surviving boundary after deleting {v}")))?;
        map.push(face);
    }
    let image: BTreeSet<FaceId> = map.iter().copied().collect();
    if image.len() != child_faces.len() {
        return Err(Error::Structure(format!(
            "deleting vertex {v} leaves child faces that contain no parent face"
        )));
    }
    debug_assert!(new_id.len() == child.node_count());
    Ok((child, child_faces, FaceMap { map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::load_drawing;
    use crate::faces::vertex_set_on_face;

    const SQUARE_K4: &str = r#"{"format":"shellcert-drawing","version":1,"mode":"geometric","n":4,
        "vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":4,"y":0},{"id":2,"x":4,"y":4},{"id":3,"x":0,"y":4}],
        "edges":[{"u":0,"v":1,"polyline":[[0,0],[4,0]]},{"u":0,"v":2,"polyline":[[0,0],[4,4]]},
                 {"u":0,"v":3,"polyline":[[0,0],[0,4]]},{"u":1,"v":2,"polyline":[[4,0],[4,4]]},
                 {"u":1,"v":3,"polyline":[[4,0],[0,4]]},{"u":2,"v":3,"polyline":[[4,4],[0,4]]}]}"#;

    #[test]
    fn deleting_from_square_smooths_the_crossing() {
        let d = load_drawing(SQUARE_K4).unwrap();
        let fs = trace_faces(&d).unwrap();
        assert_eq!(fs.len(), 5);
        let (child, cfs, map) = delete_vertex(&d, &fs, 3).unwrap();
        assert_eq!(child.n(), 3);
        assert_eq!(child.crossing_count(), 0);
        assert_eq!(cfs.len(), 2);
        // Both sides of every segment of the deleted diagonal merge.
        for &s in d.chain(Edge::new(1, 3)) {
            let (l, r) = fs.segment_sides(s);
            assert_eq!(map.apply(l), map.apply(r));
        }
        // The diagonal 0-2 is now a single straight segment.
        let g = child.geometry().unwrap();
        let s = child.chain(Edge::new(0, 2))[0];
        assert_eq!(g.segment_path(&child, s), vec![[0.0, 0.0], [2.0, 2.0], [4.0, 4.0]]);
    }

    #[test]
    fn rejects_unknown_and_too_small() {
        let d = load_drawing(SQUARE_K4).unwrap();
        let fs = trace_faces(&d).unwrap();
        assert!(matches!(delete_vertex(&d, &fs, 9), Err(Error::UnknownVertex(9))));
        let (k3, k3f, _) = delete_vertex(&d, &fs, 0).unwrap();
        assert!(matches!(delete_vertex(&k3, &k3f, 1), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn face_map_composes() {
        let d = load_drawing(SQUARE_K4).unwrap();
        let fs = trace_faces(&d).unwrap();
        let id = FaceMap::identity(fs.len());
        let (child, cfs, map) = delete_vertex(&d, &fs, 2).unwrap();
        assert_eq!(id.then(&map), map);
        for f in fs.ids() {
            assert_eq!(face_containing(&id, f).unwrap(), f);
            assert!(cfs.contains(face_containing(&map, f).unwrap()));
        }
        for g in cfs.ids() {
            assert_eq!(vertex_set_on_face(&child, &cfs, g).unwrap().len(), 3);
        }
    }
}
