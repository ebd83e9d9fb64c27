//! Combinatorial planarization of a drawing of K_n.
//!
//! Every crossing becomes a degree-4 node, every original edge becomes a chain
//! of segments, and each node stores the counterclockwise cyclic order of its
//! outgoing darts. A [`Drawing`] is always stored in canonical numbering, so two
//! drawings compare equal exactly when they are the same labeled planarized
//! graph with the same rotation system.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::faces;
use crate::geom::IPoint;
use crate::vset::VertexSet;

pub type Vertex = usize;

/// An undirected edge of K_n, stored with `lo < hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        assert_ne!(u, v, "an edge needs two distinct endpoints");
        Edge {
            lo: u.min(v),
            hi: u.max(v),
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn has(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn is_adjacent_to(self, other: Edge) -> bool {
        self.has(other.lo) || self.has(other.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad edge key {s:?}"));
        let (u, v) = s.split_once('-').ok_or_else(bad)?;
        let u: Vertex = u.parse().map_err(|_| bad())?;
        let v: Vertex = v.parse().map_err(|_| bad())?;
        if u == v {
            return Err(bad());
        }
        Ok(Edge::new(u, v))
    }
}

impl serde::Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SegmentId(pub u32);

/// One direction of a segment. Dart `2s` runs from the segment's tail to its
/// head, dart `2s + 1` runs back.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Dart(pub u32);

impl Dart {
    pub fn forward(s: SegmentId) -> Dart {
        Dart(s.0 * 2)
    }

    pub fn backward(s: SegmentId) -> Dart {
        Dart(s.0 * 2 + 1)
    }

    pub fn segment(self) -> SegmentId {
        SegmentId(self.0 / 2)
    }

    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }

    #[must_use]
    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Vertex(Vertex),
    /// A crossing of two distinct edges, stored in ascending order.
    Crossing(Edge, Edge),
}

/// A piece of an original edge between two consecutive nodes of its chain.
/// The tail is the end closer to `edge.lo()`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Segment {
    pub tail: NodeId,
    pub head: NodeId,
    pub edge: Edge,
}

/// Optional coordinates attached to a drawing.
#[derive(Clone, Debug, Default)]
pub struct Geometry {
    pub vertex_pos: BTreeMap<Vertex, IPoint>,
    /// Input polylines, oriented from `edge.lo()` to `edge.hi()`.
    pub polylines: BTreeMap<Edge, Vec<IPoint>>,
    pub node_pos: Vec<[f64; 2]>,
    /// Interior bend points of each segment, from tail to head.
    pub segment_bends: Vec<Vec<[f64; 2]>>,
}

impl Geometry {
    /// Polyline of a segment including both end nodes.
    pub fn segment_path(&self, d: &Drawing, s: SegmentId) -> Vec<[f64; 2]> {
        let seg = d.segment(s);
        let mut path = Vec::with_capacity(self.segment_bends[s.0 as usize].len() + 2);
        path.push(self.node_pos[seg.tail.0 as usize]);
        path.extend_from_slice(&self.segment_bends[s.0 as usize]);
        path.push(self.node_pos[seg.head.0 as usize]);
        path
    }

    /// Polyline traversed by a dart, from its tail to its head.
    pub fn dart_path(&self, d: &Drawing, dart: Dart) -> Vec<[f64; 2]> {
        let mut path = self.segment_path(d, dart.segment());
        if !dart.is_forward() {
            path.reverse();
        }
        path
    }
}

/// Raw geometry handed to [`Drawing::assemble`], indexed by raw node id and by
/// (edge, position of the segment in the chain).
#[derive(Clone, Debug, Default)]
pub(crate) struct RawGeometry {
    pub vertex_pos: BTreeMap<Vertex, IPoint>,
    pub polylines: BTreeMap<Edge, Vec<IPoint>>,
    pub node_pos: Vec<[f64; 2]>,
    pub bends: BTreeMap<(Edge, usize), Vec<[f64; 2]>>,
}

/// Unvalidated input to [`Drawing::assemble`]. Node ids are indices into `nodes`.
#[derive(Clone, Debug, Default)]
pub(crate) struct DrawingParts {
    pub nodes: Vec<NodeKind>,
    /// Node sequence of every edge, from `lo` to `hi`.
    pub chains: BTreeMap<Edge, Vec<NodeId>>,
    /// Counterclockwise outgoing darts of every node, each named by the edge it
    /// runs along and the neighboring node it leads to.
    pub rotation: Vec<Vec<(Edge, NodeId)>>,
    pub geometry: Option<RawGeometry>,
}

#[derive(Clone, Debug)]
pub struct Drawing {
    nodes: Vec<NodeKind>,
    segments: Vec<Segment>,
    rotation: Vec<Vec<Dart>>,
    rot_index: Vec<u32>,
    chains: BTreeMap<Edge, Vec<SegmentId>>,
    vertex_node: BTreeMap<Vertex, NodeId>,
    vertex_set: VertexSet,
    geometry: Option<Geometry>,
}

impl PartialEq for Drawing {
    /// Equality of the combinatorial structure; geometry is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.segments == other.segments
            && self.rotation == other.rotation
            && self.chains == other.chains
    }
}

impl Eq for Drawing {}

impl Drawing {
    /// Validates raw parts and stores them in canonical numbering.
    ///
    /// Returns the drawing and the new id of every raw node.
    pub(crate) fn assemble(parts: DrawingParts) -> Result<(Drawing, Vec<NodeId>)> {
        let structure = |msg: String| Error::Structure(msg);
        let raw_count = parts.nodes.len();
        if parts.rotation.len() != raw_count {
            return Err(structure(format!(
                "{} rotations for {} nodes",
                parts.rotation.len(),
                raw_count
            )));
        }

        let mut vertex_raw: BTreeMap<Vertex, usize> = BTreeMap::new();
        for (i, kind) in parts.nodes.iter().enumerate() {
            match *kind {
                NodeKind::Vertex(v) => {
                    if v > VertexSet::MAX_LABEL {
                        return Err(structure(format!("vertex label {v} exceeds {}", VertexSet::MAX_LABEL)));
                    }
                    if vertex_raw.insert(v, i).is_some() {
                        return Err(structure(format!("vertex {v} appears twice")));
                    }
                }
                NodeKind::Crossing(e, f) => {
                    if e == f {
                        return Err(structure(format!("node {i} crosses edge {e} with itself")));
                    }
                }
            }
        }
        let n = vertex_raw.len();
        if n < 3 {
            return Err(structure(format!("a drawing needs at least 3 vertices, got {n}")));
        }
        let labels: Vec<Vertex> = vertex_raw.keys().copied().collect();
        let expected: BTreeSet<Edge> = labels
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| labels[i + 1..].iter().map(move |&v| Edge::new(u, v)))
            .collect();
        let present: BTreeSet<Edge> = parts.chains.keys().copied().collect();
        if let Some(e) = expected.difference(&present).next() {
            return Err(structure(format!("edge {e} has no chain")));
        }
        if let Some(e) = present.difference(&expected).next() {
            return Err(structure(format!("chain {e} is not an edge of K_n")));
        }

        // Where each raw crossing sits in which chain.
        let mut appearances: Vec<Vec<Edge>> = vec![Vec::new(); raw_count];
        for (&e, chain) in &parts.chains {
            if chain.len() < 2 {
                return Err(structure(format!("chain {e} is too short")));
            }
            let first = chain[0].0 as usize;
            let last = chain[chain.len() - 1].0 as usize;
            if first >= raw_count || last >= raw_count {
                return Err(structure(format!("chain {e} names an unknown node")));
            }
            if parts.nodes[first] != NodeKind::Vertex(e.lo) || parts.nodes[last] != NodeKind::Vertex(e.hi) {
                return Err(structure(format!(
                    "chain {e} must run from vertex {} to vertex {}",
                    e.lo, e.hi
                )));
            }
            for &x in &chain[1..chain.len() - 1] {
                let xi = x.0 as usize;
                match parts.nodes.get(xi) {
                    Some(NodeKind::Crossing(a, b)) if *a == e || *b == e => {
                        appearances[xi].push(e);
                    }
                    Some(NodeKind::Crossing(..)) => {
                        return Err(structure(format!(
                            "chain {e} passes through crossing node {xi} of other edges"
                        )))
                    }
                    Some(NodeKind::Vertex(v)) => return Err(structure(format!("chain {e} passes through vertex {v}"))),
                    None => return Err(structure(format!("chain {e} names unknown node {xi}"))),
                }
            }
        }
        for (i, kind) in parts.nodes.iter().enumerate() {
            if let NodeKind::Crossing(e, f) = *kind {
                let mut seen = appearances[i].clone();
                seen.sort();
                let mut want = vec![e, f];
                want.sort();
                if seen != want {
                    return Err(structure(format!(
                        "crossing node {i} of {e} and {f} must appear exactly once in each chain"
                    )));
                }
            }
        }

        // Canonical node order: vertices by label, then crossings by first
        // appearance along the chains in edge order.
        let mut new_id: Vec<Option<NodeId>> = vec![None; raw_count];
        let mut nodes = Vec::with_capacity(raw_count);
        for &raw in vertex_raw.values() {
            new_id[raw] = Some(NodeId(nodes.len() as u32));
            nodes.push(parts.nodes[raw]);
        }
        for chain in parts.chains.values() {
            for &x in &chain[1..chain.len() - 1] {
                let xi = x.0 as usize;
                if new_id[xi].is_none() {
                    new_id[xi] = Some(NodeId(nodes.len() as u32));
                    nodes.push(match parts.nodes[xi] {
                        NodeKind::Crossing(a, b) => NodeKind::Crossing(a.min(b), a.max(b)),
                        k => k,
                    });
                }
            }
        }
        if nodes.len() != raw_count {
            return Err(structure("some crossing node lies on no chain".into()));
        }
        let new_id: Vec<NodeId> = new_id.into_iter().map(Option::unwrap).collect();

        let mut segments = Vec::new();
        let mut chains = BTreeMap::new();
        // (node, edge, neighbor) -> outgoing dart
        let mut dart_of: HashMap<(NodeId, Edge, NodeId), Dart> = HashMap::new();
        for (&e, chain) in &parts.chains {
            let mut segs = Vec::with_capacity(chain.len() - 1);
            for w in chain.windows(2) {
                let s = SegmentId(segments.len() as u32);
                let (a, b) = (new_id[w[0].0 as usize], new_id[w[1].0 as usize]);
                segments.push(Segment {
                    tail: a,
                    head: b,
                    edge: e,
                });
                for (key, dart) in [((a, e, b), Dart::forward(s)), ((b, e, a), Dart::backward(s))] {
                    if dart_of.insert(key, dart).is_some() {
                        return Err(structure(format!("chain {e} visits a node twice")));
                    }
                }
                segs.push(s);
            }
            chains.insert(e, segs);
        }

        let mut outgoing: Vec<Vec<Dart>> = vec![Vec::new(); nodes.len()];
        for (i, seg) in segments.iter().enumerate() {
            let s = SegmentId(i as u32);
            outgoing[seg.tail.0 as usize].push(Dart::forward(s));
            outgoing[seg.head.0 as usize].push(Dart::backward(s));
        }

        let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); nodes.len()];
        for (raw, list) in parts.rotation.iter().enumerate() {
            let x = new_id[raw];
            let mut darts = Vec::with_capacity(list.len());
            for &(e, nb) in list {
                let nb = *new_id
                    .get(nb.0 as usize)
                    .ok_or_else(|| structure(format!("rotation names unknown node {}", nb.0)))?;
                let dart = dart_of.get(&(x, e, nb)).ok_or_else(|| {
                    structure(format!(
                        "rotation of node {raw} names dart along {e} that does not leave it"
                    ))
                })?;
                darts.push(*dart);
            }
            let mut sorted = darts.clone();
            sorted.sort();
            let mut expect = outgoing[x.0 as usize].clone();
            expect.sort();
            if sorted != expect {
                return Err(structure(format!(
                    "rotation of node {raw} is not a permutation of its {} darts",
                    expect.len()
                )));
            }
            // Canonical cyclic start at the smallest dart.
            if let Some(pos) = darts.iter().enumerate().min_by_key(|(_, d)| **d).map(|(i, _)| i) {
                darts.rotate_left(pos);
            }
            rotation[x.0 as usize] = darts;
        }

        for (i, kind) in nodes.iter().enumerate() {
            let deg = rotation[i].len();
            match kind {
                NodeKind::Vertex(v) if deg != n - 1 => {
                    return Err(structure(format!("vertex {v} has degree {deg}, expected {}", n - 1)))
                }
                NodeKind::Crossing(e, f) => {
                    if deg != 4 {
                        return Err(structure(format!("crossing of {e} and {f} has degree {deg}")));
                    }
                    let r = &rotation[i];
                    let edge_at = |k: usize| segments[r[k].segment().0 as usize].edge;
                    if edge_at(0) != edge_at(2) || edge_at(1) != edge_at(3) {
                        return Err(structure(format!("edges {e} and {f} touch without crossing at a node")));
                    }
                }
                _ => {}
            }
        }

        let mut rot_index = vec![0u32; segments.len() * 2];
        for r in &rotation {
            for (k, d) in r.iter().enumerate() {
                rot_index[d.index()] = k as u32;
            }
        }

        let vertex_node = vertex_raw.keys().map(|&v| (v, new_id[vertex_raw[&v]])).collect();
        let vertex_set = labels.iter().copied().collect();

        let geometry = parts.geometry.map(|g| {
            let mut node_pos = vec![[0.0; 2]; nodes.len()];
            for (raw, p) in g.node_pos.iter().enumerate() {
                node_pos[new_id[raw].0 as usize] = *p;
            }
            let mut segment_bends = vec![Vec::new(); segments.len()];
            for (&e, segs) in &chains {
                for (k, s) in segs.iter().enumerate() {
                    if let Some(b) = g.bends.get(&(e, k)) {
                        segment_bends[s.0 as usize] = b.clone();
                    }
                }
            }
            Geometry {
                vertex_pos: g.vertex_pos,
                polylines: g.polylines,
                node_pos,
                segment_bends,
            }
        });

        let drawing = Drawing {
            nodes,
            segments,
            rotation,
            rot_index,
            chains,
            vertex_node,
            vertex_set,
            geometry,
        };
        faces::trace_faces(&drawing)?;
        Ok((drawing, new_id))
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertex_node.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertex_node.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertex_set
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertex_node.contains_key(&v)
    }

    pub fn vertex_node(&self, v: Vertex) -> Option<NodeId> {
        self.vertex_node.get(&v).copied()
    }

    /// All edges in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.chains.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_kind(&self, x: NodeId) -> NodeKind {
        self.nodes[x.0 as usize]
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn segment(&self, s: SegmentId) -> Segment {
        self.segments[s.0 as usize]
    }

    pub fn dart_count(&self) -> usize {
        self.segments.len() * 2
    }

    pub fn tail(&self, d: Dart) -> NodeId {
        let s = self.segment(d.segment());
        if d.is_forward() {
            s.tail
        } else {
            s.head
        }
    }

    pub fn head(&self, d: Dart) -> NodeId {
        self.tail(d.rev())
    }

    pub fn dart_edge(&self, d: Dart) -> Edge {
        self.segment(d.segment()).edge
    }

    /// Counterclockwise outgoing darts at a node.
    pub fn rotation(&self, x: NodeId) -> &[Dart] {
        &self.rotation[x.0 as usize]
    }

    /// Next dart of the boundary walk that keeps the current face on the left:
    /// reverse the dart, then step clockwise in the rotation at its head.
    pub fn face_successor(&self, d: Dart) -> Dart {
        let r = d.rev();
        let rot = &self.rotation[self.tail(r).0 as usize];
        let i = self.rot_index[r.index()] as usize;
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Segments of an edge, ordered from `lo` to `hi`.
    pub fn chain(&self, e: Edge) -> &[SegmentId] {
        &self.chains[&e]
    }

    /// Darts traversing edge `{u, v}` from `u` to `v`.
    pub fn curve_darts(&self, u: Vertex, v: Vertex) -> Vec<Dart> {
        let e = Edge::new(u, v);
        let chain = self.chain(e);
        if u == e.lo {
            chain.iter().map(|&s| Dart::forward(s)).collect()
        } else {
            chain.iter().rev().map(|&s| Dart::backward(s)).collect()
        }
    }

    /// Node sequence of an edge from `lo` to `hi`.
    pub fn chain_nodes(&self, e: Edge) -> Vec<NodeId> {
        let chain = self.chain(e);
        let mut out = Vec::with_capacity(chain.len() + 1);
        out.push(self.segment(chain[0]).tail);
        out.extend(chain.iter().map(|&s| self.segment(s).head));
        out
    }

    /// Number of crossing nodes, i.e. cr(D).
    pub fn crossing_count(&self) -> usize {
        self.nodes.len() - self.n()
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    /// Returns the parts this drawing was assembled from, in its own numbering.
    #[cfg(test)]
    pub(crate) fn to_parts(&self) -> DrawingParts {
        let chains = self.edges().map(|e| (e, self.chain_nodes(e))).collect();
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().map(|&d| (self.dart_edge(d), self.head(d))).collect())
            .collect();
        let geometry = self.geometry.as_ref().map(|g| RawGeometry {
            vertex_pos: g.vertex_pos.clone(),
            polylines: g.polylines.clone(),
            node_pos: g.node_pos.clone(),
            bends: self
                .chains
                .iter()
                .flat_map(|(&e, segs)| {
                    segs.iter()
                        .enumerate()
                        .map(move |(k, s)| ((e, k), g.segment_bends[s.0 as usize].clone()))
                })
                .collect(),
        });
        DrawingParts {
            nodes: self.nodes.clone(),
            chains,
            rotation,
            geometry,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_normalizes_and_parses() {
        let e = Edge::new(5, 2);
        assert_eq!((e.lo(), e.hi()), (2, 5));
        assert_eq!(e.to_string(), "2-5");
        assert_eq!("5-2".parse::<Edge>().unwrap(), e);
        assert!("3-3".parse::<Edge>().is_err());
        assert!("x-3".parse::<Edge>().is_err());
        assert_eq!(e.other(2), Some(5));
        assert!(e.is_adjacent_to(Edge::new(5, 9)));
        assert!(!e.is_adjacent_to(Edge::new(1, 9)));
    }

    #[test]
    fn dart_arithmetic() {
        let s = SegmentId(7);
        assert_eq!(Dart::forward(s).rev(), Dart::backward(s));
        assert_eq!(Dart::backward(s).segment(), s);
        assert!(Dart::forward(s).is_forward());
    }

    fn triangle_parts() -> DrawingParts {
        let nodes = vec![NodeKind::Vertex(0), NodeKind::Vertex(1), NodeKind::Vertex(2)];
        let (a, b, c) = (NodeId(0), NodeId(1), NodeId(2));
        let chains = [
            (Edge::new(0, 1), vec![a, b]),
            (Edge::new(0, 2), vec![a, c]),
            (Edge::new(1, 2), vec![b, c]),
        ]
        .into_iter()
        .collect();
        let rotation = vec![
            vec![(Edge::new(0, 1), b), (Edge::new(0, 2), c)],
            vec![(Edge::new(1, 2), c), (Edge::new(0, 1), a)],
            vec![(Edge::new(0, 2), a), (Edge::new(1, 2), b)],
        ];
        DrawingParts {
            nodes,
            chains,
            rotation,
            geometry: None,
        }
    }

    #[test]
    fn assembles_triangle() {
        let (d, _) = Drawing::assemble(triangle_parts()).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.segment_count(), 3);
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.curve_darts(2, 0), vec![Dart::backward(SegmentId(1))]);
        let (again, _) = Drawing::assemble(d.to_parts()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn rejects_missing_chain() {
        let mut parts = triangle_parts();
        parts.chains.remove(&Edge::new(1, 2));
        assert!(matches!(Drawing::assemble(parts), Err(Error::Structure(_))));
    }

    #[test]
    fn rejects_bad_rotation() {
        let mut parts = triangle_parts();
        parts.rotation[0].pop();
        assert!(matches!(Drawing::assemble(parts), Err(Error::Structure(_))));
    }
}
