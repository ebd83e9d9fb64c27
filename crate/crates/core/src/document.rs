//! Drawing interchange documents.
//!
//! Two modes share one header:
//!
//! ```json
//! {"format":"shellcert-drawing","version":1,"mode":"geometric","n":4, ...}
//! ```
//!
//! Geometric documents list integer vertex coordinates and one polyline per
//! edge. Combinatorial documents list nodes, counterclockwise rotations and
//! edge chains. Loaders reject anything malformed rather than repairing it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::drawing::{Drawing, DrawingParts, Edge, NodeId, NodeKind, Vertex};
use crate::error::{Error, Result};
use crate::geom::IPoint;
use crate::planarize::planarize;

pub const DRAWING_FORMAT: &str = "shellcert-drawing";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: Vertex,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: Vertex,
    pub v: Vertex,
    pub polyline: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricDocument {
    pub format: String,
    pub version: u32,
    pub mode: String,
    pub n: usize,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<[[Vertex; 2]; 2]>,
}

/// A dart in a rotation list: the neighboring node, optionally qualified by
/// the edge when two segments lead to the same neighbor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DartEntry {
    Neighbor(u32),
    Along(u32, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinatorialDocument {
    pub format: String,
    pub version: u32,
    pub mode: String,
    pub n: usize,
    /// Must be `"ccw"`.
    pub orientation: String,
    pub nodes: Vec<NodeEntry>,
    pub rotations: BTreeMap<u32, Vec<DartEntry>>,
    pub chains: BTreeMap<String, Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrawingDocument {
    Geometric(GeometricDocument),
    Combinatorial(CombinatorialDocument),
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
    mode: String,
}

impl DrawingDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let header: Header =
            serde_json::from_value(value.clone()).map_err(|e| Error::Malformed(format!("bad header: {e}")))?;
        if header.format != DRAWING_FORMAT {
            return Err(Error::Malformed(format!("unknown format {:?}", header.format)));
        }
        if header.version != FORMAT_VERSION {
            return Err(Error::Malformed(format!("unsupported version {}", header.version)));
        }
        let malformed = |e: serde_json::Error| Error::Malformed(e.to_string());
        match header.mode.as_str() {
            "geometric" => Ok(DrawingDocument::Geometric(
                serde_json::from_value(value).map_err(malformed)?,
            )),
            "combinatorial" => Ok(DrawingDocument::Combinatorial(
                serde_json::from_value(value).map_err(malformed)?,
            )),
            other => Err(Error::Malformed(format!("unknown mode {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            DrawingDocument::Geometric(g) => g.to_json(),
            DrawingDocument::Combinatorial(c) => c.to_json(),
        }
    }

    pub fn load(&self) -> Result<Drawing> {
        match self {
            DrawingDocument::Geometric(g) => g.load(),
            DrawingDocument::Combinatorial(c) => c.load(),
        }
    }
}

/// Parses and loads a drawing document of either mode.
pub fn load_drawing(text: &str) -> Result<Drawing> {
    DrawingDocument::parse(text)?.load()
}

fn check_n(n: usize) -> Result<()> {
    if !(3..=64).contains(&n) {
        return Err(Error::Malformed(format!("n must be between 3 and 64, got {n}")));
    }
    Ok(())
}

impl GeometricDocument {
    pub fn new(vertex_pos: &BTreeMap<Vertex, IPoint>, polylines: &BTreeMap<Edge, Vec<IPoint>>) -> Self {
        GeometricDocument {
            format: DRAWING_FORMAT.into(),
            version: FORMAT_VERSION,
            mode: "geometric".into(),
            n: vertex_pos.len(),
            vertices: vertex_pos
                .iter()
                .map(|(&id, p)| VertexEntry { id, x: p.x, y: p.y })
                .collect(),
            edges: polylines
                .iter()
                .map(|(e, line)| EdgeEntry {
                    u: e.lo(),
                    v: e.hi(),
                    polyline: line.iter().map(|p| [p.x, p.y]).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn load(&self) -> Result<Drawing> {
        if self.mode != "geometric" {
            return Err(Error::Malformed(format!("mode {:?} is not geometric", self.mode)));
        }
        check_n(self.n)?;
        let mut vertex_pos = BTreeMap::new();
        for v in &self.vertices {
            if v.id >= self.n {
                return Err(Error::Malformed(format!("vertex id {} out of range", v.id)));
            }
            if vertex_pos.insert(v.id, IPoint::new(v.x, v.y)).is_some() {
                return Err(Error::Malformed(format!("vertex {} listed twice", v.id)));
            }
        }
        if vertex_pos.len() != self.n {
            return Err(Error::Malformed(format!(
                "{} vertices listed, expected {}",
                vertex_pos.len(),
                self.n
            )));
        }
        let mut polylines = BTreeMap::new();
        for entry in &self.edges {
            if entry.u >= self.n || entry.v >= self.n || entry.u == entry.v {
                return Err(Error::Malformed(format!("bad edge {}-{}", entry.u, entry.v)));
            }
            let e = Edge::new(entry.u, entry.v);
            let mut line: Vec<IPoint> = entry.polyline.iter().map(|p| IPoint::new(p[0], p[1])).collect();
            if line.first() != Some(&vertex_pos[&entry.u]) || line.last() != Some(&vertex_pos[&entry.v]) {
                return Err(Error::Malformed(format!(
                    "polyline of edge {}-{} must run from vertex {} to vertex {}",
                    entry.u, entry.v, entry.u, entry.v
                )));
            }
            if entry.u > entry.v {
                line.reverse();
            }
            if polylines.insert(e, line).is_some() {
                return Err(Error::Malformed(format!("edge {e} listed twice")));
            }
        }
        let needed = self.n * (self.n - 1) / 2;
        if polylines.len() != needed {
            return Err(Error::Malformed(format!(
                "{} edges listed, K_{} has {needed}",
                polylines.len(),
                self.n
            )));
        }
        let parts = planarize(&vertex_pos, &polylines)?;
        Ok(Drawing::assemble(parts)?.0)
    }
}

impl CombinatorialDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn load(&self) -> Result<Drawing> {
        if self.mode != "combinatorial" {
            return Err(Error::Malformed(format!("mode {:?} is not combinatorial", self.mode)));
        }
        if self.orientation != "ccw" {
            return Err(Error::Malformed(format!(
                "rotations must be declared counterclockwise (\"ccw\"), got {:?}",
                self.orientation
            )));
        }
        check_n(self.n)?;

        let mut raw_of: BTreeMap<u32, usize> = BTreeMap::new();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut vertices = BTreeSet::new();
        for entry in &self.nodes {
            if raw_of.insert(entry.id, nodes.len()).is_some() {
                return Err(Error::Malformed(format!("node id {} listed twice", entry.id)));
            }
            let kind = match (entry.kind.as_str(), entry.edges) {
                ("vertex", None) => {
                    let v = entry.id as usize;
                    if v >= self.n {
                        return Err(Error::Malformed(format!(
                            "vertex node id {v} must be a vertex label below n = {}",
                            self.n
                        )));
                    }
                    vertices.insert(v);
                    NodeKind::Vertex(v)
                }
                ("crossing", Some([[a, b], [c, d]])) => {
                    if a == b || c == d || [a, b, c, d].iter().any(|&x| x >= self.n) {
                        return Err(Error::Malformed(format!("crossing node {} has bad edges", entry.id)));
                    }
                    let (e, f) = (Edge::new(a, b), Edge::new(c, d));
                    NodeKind::Crossing(e.min(f), e.max(f))
                }
                (kind, _) => {
                    return Err(Error::Malformed(format!(
                        "node {} has kind {kind:?}; vertices carry no edges, crossings carry two",
                        entry.id
                    )))
                }
            };
            nodes.push(kind);
        }
        if vertices.len() != self.n {
            return Err(Error::Malformed(format!(
                "{} vertex nodes listed, expected {}",
                vertices.len(),
                self.n
            )));
        }
        let resolve = |id: u32| -> Result<NodeId> {
            raw_of
                .get(&id)
                .map(|&r| NodeId(r as u32))
                .ok_or_else(|| Error::Malformed(format!("unknown node id {id}")))
        };

        let mut chains = BTreeMap::new();
        for (key, seq) in &self.chains {
            let (su, sv) = key
                .split_once('-')
                .ok_or_else(|| Error::Malformed(format!("bad chain key {key:?}")))?;
            let u: Vertex = su
                .parse()
                .map_err(|_| Error::Malformed(format!("bad chain key {key:?}")))?;
            let v: Vertex = sv
                .parse()
                .map_err(|_| Error::Malformed(format!("bad chain key {key:?}")))?;
            if u == v {
                return Err(Error::Malformed(format!("bad chain key {key:?}")));
            }
            let mut nodes_seq: Vec<NodeId> = seq.iter().map(|&id| resolve(id)).collect::<Result<_>>()?;
            if seq.first().map(|&x| x as usize) != Some(u) || seq.last().map(|&x| x as usize) != Some(v) {
                return Err(Error::Malformed(format!(
                    "chain {key:?} must run from node {u} to node {v}"
                )));
            }
            if u > v {
                nodes_seq.reverse();
            }
            if chains.insert(Edge::new(u, v), nodes_seq).is_some() {
                return Err(Error::Malformed(format!("edge {u}-{v} has two chains")));
            }
        }

        // Neighbors reachable from each node, with the edges that lead there.
        let mut links: Vec<Vec<(NodeId, Edge)>> = vec![Vec::new(); nodes.len()];
        for (&e, seq) in &chains {
            for w in seq.windows(2) {
                links[w[0].0 as usize].push((w[1], e));
                links[w[1].0 as usize].push((w[0], e));
            }
        }

        let mut rotation = vec![Vec::new(); nodes.len()];
        for (&id, list) in &self.rotations {
            let x = resolve(id)?.0 as usize;
            if !rotation[x].is_empty() {
                return Err(Error::Malformed(format!("node {id} has two rotations")));
            }
            for entry in list {
                let (nb, edge) = match entry {
                    DartEntry::Neighbor(nb) => {
                        let target = resolve(*nb)?;
                        let mut found = links[x].iter().filter(|(y, _)| *y == target);
                        let (Some(&(_, e)), None) = (found.next(), found.next()) else {
                            return Err(Error::Malformed(format!(
                                "rotation of node {id}: neighbor {nb} does not name exactly one dart"
                            )));
                        };
                        (target, e)
                    }
                    DartEntry::Along(nb, key) => (resolve(*nb)?, key.parse::<Edge>()?),
                };
                rotation[x].push((edge, nb));
            }
        }
        if let Some(x) = rotation.iter().position(Vec::is_empty) {
            return Err(Error::Malformed(format!("node {} has no rotation", self.nodes[x].id)));
        }

        let parts = DrawingParts {
            nodes,
            chains,
            rotation,
            geometry: None,
        };
        Ok(Drawing::assemble(parts)?.0)
    }
}

impl Drawing {
    /// Canonical combinatorial export. Vertex nodes keep their labels as ids;
    /// crossing nodes are numbered after the largest label.
    pub fn to_combinatorial(&self) -> CombinatorialDocument {
        let max_label = self.vertices().max().unwrap_or(0) as u32;
        let doc_id = |x: NodeId| -> u32 {
            match self.node_kind(x) {
                NodeKind::Vertex(v) => v as u32,
                NodeKind::Crossing(..) => max_label + 1 + (x.0 - self.n() as u32),
            }
        };
        let nodes = (0..self.node_count() as u32)
            .map(NodeId)
            .map(|x| match self.node_kind(x) {
                NodeKind::Vertex(_) => NodeEntry {
                    id: doc_id(x),
                    kind: "vertex".into(),
                    edges: None,
                },
                NodeKind::Crossing(e, f) => NodeEntry {
                    id: doc_id(x),
                    kind: "crossing".into(),
                    edges: Some([[e.lo(), e.hi()], [f.lo(), f.hi()]]),
                },
            })
            .collect();
        let rotations = (0..self.node_count() as u32)
            .map(NodeId)
            .map(|x| {
                let rot = self.rotation(x);
                let heads: Vec<NodeId> = rot.iter().map(|&d| self.head(d)).collect();
                let entries = rot
                    .iter()
                    .zip(&heads)
                    .map(|(&d, &h)| {
                        if heads.iter().filter(|&&y| y == h).count() == 1 {
                            DartEntry::Neighbor(doc_id(h))
                        } else {
                            DartEntry::Along(doc_id(h), self.dart_edge(d).to_string())
                        }
                    })
                    .collect();
                (doc_id(x), entries)
            })
            .collect();
        let chains = self
            .edges()
            .map(|e| (e.to_string(), self.chain_nodes(e).into_iter().map(doc_id).collect()))
            .collect();
        CombinatorialDocument {
            format: DRAWING_FORMAT.into(),
            version: FORMAT_VERSION,
            mode: "combinatorial".into(),
            n: self.n(),
            orientation: "ccw".into(),
            nodes,
            rotations,
            chains,
        }
    }

    /// Geometric export of the original polylines, if the drawing carries them.
    pub fn to_geometric(&self) -> Result<GeometricDocument> {
        let g = self.geometry().ok_or(Error::NoGeometry)?;
        Ok(GeometricDocument::new(&g.vertex_pos, &g.polylines))
    }

    /// Hex SHA-256 of the canonical combinatorial export.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let hash = Sha256::digest(self.to_combinatorial().to_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE_K4: &str = r#"{"format":"shellcert-drawing","version":1,"mode":"geometric","n":4,
        "vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":4,"y":0},{"id":2,"x":4,"y":4},{"id":3,"x":0,"y":4}],
        "edges":[{"u":0,"v":1,"polyline":[[0,0],[4,0]]},{"u":0,"v":2,"polyline":[[0,0],[4,4]]},
                 {"u":0,"v":3,"polyline":[[0,0],[0,4]]},{"u":1,"v":2,"polyline":[[4,0],[4,4]]},
                 {"u":1,"v":3,"polyline":[[4,0],[0,4]]},{"u":2,"v":3,"polyline":[[4,4],[0,4]]}]}"#;

    #[test]
    fn geometric_square_has_one_crossing() {
        let d = load_drawing(SQUARE_K4).unwrap();
        assert_eq!(d.n(), 4);
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.segment_count(), 8);
    }

    #[test]
    fn combinatorial_export_round_trips() {
        let d = load_drawing(SQUARE_K4).unwrap();
        let text = d.to_combinatorial().to_json();
        let back = load_drawing(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.digest(), d.digest());
    }

    #[test]
    fn rejects_unknown_fields_and_modes() {
        let bad = SQUARE_K4.replace("\"n\":4,", "\"n\":4,\"extra\":1,");
        assert!(matches!(load_drawing(&bad), Err(Error::Malformed(_))));
        let bad = SQUARE_K4.replace("geometric", "sketch");
        assert!(matches!(load_drawing(&bad), Err(Error::Malformed(_))));
        let bad = SQUARE_K4.replace("shellcert-drawing", "other");
        assert!(matches!(load_drawing(&bad), Err(Error::Malformed(_))));
        assert!(load_drawing("{").is_err());
    }

    #[test]
    fn rejects_missing_edge() {
        let bad = SQUARE_K4
            .replace(r#"{"u":2,"v":3,"polyline":[[4,4],[0,4]]}"#, "")
            .replace("[0,4]]},]", "[0,4]]}]");
        assert!(matches!(load_drawing(&bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn rejects_polyline_not_starting_at_u() {
        let bad = SQUARE_K4.replace(
            r#"{"u":0,"v":1,"polyline":[[0,0],[4,0]]}"#,
            r#"{"u":0,"v":1,"polyline":[[4,0],[0,0]]}"#,
        );
        assert!(matches!(load_drawing(&bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn rejects_clockwise_declaration() {
        let d = load_drawing(SQUARE_K4).unwrap();
        let mut doc = d.to_combinatorial();
        doc.orientation = "cw".into();
        assert!(matches!(doc.load(), Err(Error::Malformed(_))));
    }
}
