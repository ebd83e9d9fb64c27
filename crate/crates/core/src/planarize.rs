//! Planarization of straight-line and polyline drawings on integer coordinates.
//!
//! Crossings are found with exact predicates. Anything that is not a clean
//! transversal crossing of two polyline pieces in their interiors is rejected:
//! an edge through a vertex, touching curves, overlapping pieces, a crossing
//! exactly at a bend point, or three curves through one point.

use std::collections::BTreeMap;

use crate::drawing::{DrawingParts, Edge, NodeId, NodeKind, RawGeometry, Vertex};
use crate::error::{Error, Result};
use crate::geom::{angle_cmp, intersect_pieces, on_segment, Frac, IPoint, PieceIntersection};

#[derive(Clone, Copy, Debug)]
struct Piece {
    edge: Edge,
    idx: usize,
    last: bool,
    a: IPoint,
    b: IPoint,
}

impl Piece {
    fn dir(&self) -> (i64, i64) {
        (self.b.x - self.a.x, self.b.y - self.a.y)
    }

    fn min_x(&self) -> i64 {
        self.a.x.min(self.b.x)
    }

    fn max_x(&self) -> i64 {
        self.a.x.max(self.b.x)
    }
}

fn degenerate(reason: &'static str, elements: String) -> Error {
    Error::Degenerate { reason, elements }
}

pub(crate) fn planarize(
    vertex_pos: &BTreeMap<Vertex, IPoint>,
    polylines: &BTreeMap<Edge, Vec<IPoint>>,
) -> Result<DrawingParts> {
    for (&v, p) in vertex_pos {
        if !p.in_range() {
            return Err(Error::Malformed(format!("vertex {v} coordinates out of range")));
        }
    }
    let mut by_pos: BTreeMap<IPoint, Vertex> = BTreeMap::new();
    for (&v, &p) in vertex_pos {
        if let Some(u) = by_pos.insert(p, v) {
            return Err(degenerate("coincident vertices", format!("vertices {u} and {v}")));
        }
    }

    let mut pieces = Vec::new();
    for (&e, line) in polylines {
        if line.len() < 2 {
            return Err(Error::Malformed(format!(
                "polyline of edge {e} has fewer than 2 points"
            )));
        }
        if line[0] != vertex_pos[&e.lo()] || line[line.len() - 1] != vertex_pos[&e.hi()] {
            return Err(Error::Malformed(format!(
                "polyline of edge {e} must start at vertex {} and end at vertex {}",
                e.lo(),
                e.hi()
            )));
        }
        if let Some(p) = line.iter().find(|p| !p.in_range()) {
            return Err(Error::Malformed(format!(
                "polyline of edge {e} has out-of-range point ({}, {})",
                p.x, p.y
            )));
        }
        for (idx, w) in line.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(degenerate(
                    "zero-length polyline piece",
                    format!("edge {e} piece {idx}"),
                ));
            }
            pieces.push(Piece {
                edge: e,
                idx,
                last: idx + 2 == line.len(),
                a: w[0],
                b: w[1],
            });
        }
    }

    // Curves may meet a vertex only at their own ends.
    for pc in &pieces {
        for (&w, &p) in vertex_pos {
            if !on_segment(p, pc.a, pc.b) {
                continue;
            }
            let at_own_end =
                (w == pc.edge.lo() && pc.idx == 0 && p == pc.a) || (w == pc.edge.hi() && pc.last && p == pc.b);
            if !at_own_end {
                return Err(degenerate(
                    "edge passes through a vertex",
                    format!("edge {} piece {} and vertex {w}", pc.edge, pc.idx),
                ));
            }
        }
    }

    // Sweep over x-extents to find candidate pairs.
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| pieces[i].min_x());
    let mut crossings: Vec<(Edge, Edge, [f64; 2])> = Vec::new();
    let mut events: Vec<Vec<(Frac, usize)>> = vec![Vec::new(); pieces.len()];
    for (oi, &i) in order.iter().enumerate() {
        let p = pieces[i];
        for &j in &order[oi + 1..] {
            let q = pieces[j];
            if q.min_x() > p.max_x() {
                break;
            }
            let hit = intersect_pieces(p.a, p.b, q.a, q.b);
            if hit == PieceIntersection::None {
                continue;
            }
            let name = || format!("edge {} piece {} and edge {} piece {}", p.edge, p.idx, q.edge, q.idx);
            if p.edge == q.edge {
                let consecutive = p.idx.abs_diff(q.idx) == 1;
                if !consecutive || hit == PieceIntersection::Overlap {
                    return Err(degenerate("edge is not a simple curve", name()));
                }
                continue;
            }
            match hit {
                PieceIntersection::None => {}
                PieceIntersection::Overlap => {
                    return Err(degenerate("overlapping segments", name()));
                }
                PieceIntersection::Touch(pt) => {
                    let shared = by_pos.get(&pt).is_some_and(|&w| p.edge.has(w) && q.edge.has(w));
                    if !shared {
                        return Err(degenerate(
                            "curves touch without a transversal crossing",
                            format!("{} at ({}, {})", name(), pt.x, pt.y),
                        ));
                    }
                }
                PieceIntersection::Proper { t, s } => {
                    let node = crossings.len();
                    let tf = t.to_f64();
                    let pos = [
                        p.a.x as f64 + tf * (p.b.x - p.a.x) as f64,
                        p.a.y as f64 + tf * (p.b.y - p.a.y) as f64,
                    ];
                    crossings.push((p.edge, q.edge, pos));
                    events[i].push((t, node));
                    events[j].push((s, node));
                }
            }
        }
    }

    for (i, ev) in events.iter_mut().enumerate() {
        ev.sort_by(|x, y| x.0.cmp(&y.0));
        if ev.windows(2).any(|w| w[0].0 == w[1].0) {
            let pc = pieces[i];
            return Err(degenerate(
                "three curves through one point",
                format!("edge {} piece {}", pc.edge, pc.idx),
            ));
        }
    }

    // Raw node ids: vertices in label order, then crossings.
    let labels: Vec<Vertex> = vertex_pos.keys().copied().collect();
    let vertex_raw: BTreeMap<Vertex, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let offset = labels.len();
    let mut nodes: Vec<NodeKind> = labels.iter().map(|&v| NodeKind::Vertex(v)).collect();
    let mut node_pos: Vec<[f64; 2]> = labels.iter().map(|v| vertex_pos[v].to_f64()).collect();
    for &(e, f, pos) in &crossings {
        nodes.push(NodeKind::Crossing(e.min(f), e.max(f)));
        node_pos.push(pos);
    }

    let mut chains: BTreeMap<Edge, Vec<NodeId>> = BTreeMap::new();
    let mut bends: BTreeMap<(Edge, usize), Vec<[f64; 2]>> = BTreeMap::new();
    // (node, edge) -> direction of the edge through that node, oriented lo -> hi
    let mut through_dir: BTreeMap<(usize, Edge), (i64, i64)> = BTreeMap::new();
    let mut first_dir: BTreeMap<Edge, (i64, i64)> = BTreeMap::new();
    let mut last_dir: BTreeMap<Edge, (i64, i64)> = BTreeMap::new();
    let mut start = 0;
    while start < pieces.len() {
        let e = pieces[start].edge;
        let mut end = start;
        while end < pieces.len() && pieces[end].edge == e {
            end += 1;
        }
        let mut chain = vec![NodeId(vertex_raw[&e.lo()] as u32)];
        let mut current: Vec<[f64; 2]> = Vec::new();
        for k in start..end {
            let pc = pieces[k];
            for &(_, node) in &events[k] {
                let raw = offset + node;
                bends.insert((e, chain.len() - 1), std::mem::take(&mut current));
                chain.push(NodeId(raw as u32));
                through_dir.insert((raw, e), pc.dir());
            }
            if !pc.last {
                current.push(pc.b.to_f64());
            }
        }
        bends.insert((e, chain.len() - 1), current);
        chain.push(NodeId(vertex_raw[&e.hi()] as u32));
        first_dir.insert(e, pieces[start].dir());
        last_dir.insert(e, pieces[end - 1].dir());
        chains.insert(e, chain);
        start = end;
    }

    // Darts at every node with their leaving directions.
    let mut darts: Vec<Vec<((i64, i64), Edge, NodeId)>> = vec![Vec::new(); nodes.len()];
    for (&e, chain) in &chains {
        let lo = chain[0].0 as usize;
        let hi = chain[chain.len() - 1].0 as usize;
        darts[lo].push((first_dir[&e], e, chain[1]));
        let (dx, dy) = last_dir[&e];
        darts[hi].push(((-dx, -dy), e, chain[chain.len() - 2]));
        for k in 1..chain.len() - 1 {
            let x = chain[k].0 as usize;
            let (dx, dy) = through_dir[&(x, e)];
            darts[x].push(((dx, dy), e, chain[k + 1]));
            darts[x].push(((-dx, -dy), e, chain[k - 1]));
        }
    }
    let mut rotation = Vec::with_capacity(nodes.len());
    for (x, list) in darts.iter_mut().enumerate() {
        list.sort_by(|a, b| angle_cmp(a.0, b.0));
        if list.windows(2).any(|w| angle_cmp(w[0].0, w[1].0).is_eq()) {
            return Err(degenerate(
                "two curves leave a node in the same direction",
                format!("node {x}"),
            ));
        }
        rotation.push(list.iter().map(|&(_, e, nb)| (e, nb)).collect());
    }

    Ok(DrawingParts {
        nodes,
        chains,
        rotation,
        geometry: Some(RawGeometry {
            vertex_pos: vertex_pos.clone(),
            polylines: polylines.clone(),
            node_pos,
            bends,
        }),
    })
}
