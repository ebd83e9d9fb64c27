//! Test-side oracles written independently of the library's search and
//! side-classification code.
#![allow(dead_code)]

use std::collections::HashMap;

use shellcert::deletion::{delete_vertex, face_containing, FaceMap};
use shellcert::faces::{face_at_point, unbounded_face};
use shellcert::geom::{winding_number, IPoint};
use shellcert::kedges::Orientation;
use shellcert::{trace_faces, Drawing, Edge, FaceId, FaceSet, VertexSet};

pub type Vertex = usize;

/// `H(n)` evaluated from the conjecture's formula with floor division on
/// each factor, in wide arithmetic.
pub fn hh_formula(n: u64) -> u64 {
    let f = |d: u64| u128::from(n.saturating_sub(d) / 2);
    let p = f(0) * f(1) * f(2) * f(3);
    (p / 4) as u64
}

pub fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= u128::from(n - i);
        den *= u128::from(i + 1);
    }
    (num / den) as u64
}

/// Closed polygon of the triangle curve u -> v -> w -> u from the input polylines.
pub fn triangle_polygon(d: &Drawing, u: Vertex, v: Vertex, w: Vertex) -> Vec<IPoint> {
    let g = d.geometry().expect("geometric drawing");
    let mut poly = Vec::new();
    for (a, b) in [(u, v), (v, w), (w, u)] {
        let mut line = g.polylines[&Edge::new(a, b)].clone();
        if a > b {
            line.reverse();
        }
        poly.extend_from_slice(&line[..line.len() - 1]);
    }
    poly
}

const SCALE_BITS: u32 = 16;

/// A point strictly inside face `f`, in coordinates scaled by `2^SCALE_BITS`.
/// Taken just left of the midpoint of the longest boundary piece and
/// confirmed with a point-location query.
pub fn interior_point(d: &Drawing, fs: &FaceSet, f: FaceId) -> Option<IPoint> {
    let g = d.geometry()?;
    let mut pieces = Vec::new();
    for &dart in fs.boundary(f) {
        let path = g.dart_path(d, dart);
        for w in path.windows(2) {
            let len = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
            pieces.push((len, w[0], w[1]));
        }
    }
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
    let s = f64::from(1u32 << SCALE_BITS);
    for (len, a, b) in pieces.into_iter().take(8) {
        if len <= 0.0 {
            continue;
        }
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let normal = [-(b[1] - a[1]) / len, (b[0] - a[0]) / len];
        let off = (len * 1e-3).min(0.25);
        let p = [mid[0] + normal[0] * off, mid[1] + normal[1] * off];
        if face_at_point(d, fs, p[0], p[1]).ok() == Some(f) {
            return Some(IPoint::new((p[0] * s).round() as i64, (p[1] * s).round() as i64));
        }
    }
    None
}

/// Orientation of triangle (u, v, w) relative to face `f` by winding number:
/// `f` is left of a simple closed curve iff its winding number is 1 for a
/// counterclockwise curve or 0 for a clockwise one.
pub fn winding_orientation(
    d: &Drawing,
    fs: &FaceSet,
    f: FaceId,
    u: Vertex,
    v: Vertex,
    w: Vertex,
) -> Option<Orientation> {
    let s = 1i64 << SCALE_BITS;
    let poly: Vec<IPoint> = triangle_polygon(d, u, v, w)
        .into_iter()
        .map(|p| IPoint::new(p.x * s, p.y * s))
        .collect();
    let ccw = shellcert::geom::signed_area2(&poly) > 0;
    let wn = if Some(f) == unbounded_face(d, fs).ok() {
        0
    } else {
        winding_number(&poly, interior_point(d, fs, f)?)
    };
    let left = if ccw { wn == 1 } else { wn == 0 };
    Some(if left { Orientation::Plus } else { Orientation::Minus })
}

/// k-value of a straight-line drawing relative to the unbounded face:
/// the smaller of the counterclockwise and clockwise witness counts.
pub fn ccw_k_value(d: &Drawing, e: Edge) -> usize {
    let g = d.geometry().expect("geometric drawing");
    let (a, b) = (g.vertex_pos[&e.lo()], g.vertex_pos[&e.hi()]);
    let mut ccw = 0;
    let mut cw = 0;
    for (&w, &p) in &g.vertex_pos {
        if e.has(w) {
            continue;
        }
        match shellcert::geom::orient(a, b, p) {
            x if x > 0 => ccw += 1,
            x if x < 0 => cw += 1,
            _ => panic!("collinear witness"),
        }
    }
    ccw.min(cw)
}

/// Vertices on the face containing `f` after deleting a vertex set,
/// recomputed from the root by plain repeated deletion.
pub struct NaiveIncidence<'a> {
    d: &'a Drawing,
    fs: &'a FaceSet,
    cache: HashMap<u64, Vec<u64>>,
}

impl<'a> NaiveIncidence<'a> {
    pub fn new(d: &'a Drawing, fs: &'a FaceSet) -> Self {
        NaiveIncidence {
            d,
            fs,
            cache: HashMap::new(),
        }
    }

    pub fn incident(&mut self, removed: &[Vertex], f: FaceId) -> Vec<Vertex> {
        let key = removed.iter().fold(0u64, |b, &v| b | 1 << v);
        if !self.cache.contains_key(&key) {
            let per_face = self.compute(key);
            self.cache.insert(key, per_face);
        }
        let bits = self.cache[&key][f.index()];
        (0..64).filter(|v| bits >> v & 1 == 1).collect()
    }

    fn compute(&self, key: u64) -> Vec<u64> {
        let remaining: Vec<Vertex> = self.d.vertices().filter(|v| key >> v & 1 == 0).collect();
        if remaining.len() < 3 {
            let bits = remaining.iter().fold(0u64, |b, &v| b | 1 << v);
            return vec![bits; self.fs.len()];
        }
        let mut d = self.d.clone();
        let mut fs = self.fs.clone();
        let mut map = FaceMap::identity(fs.len());
        for v in (0..64).filter(|v| key >> v & 1 == 1) {
            let (child, child_fs, step) = delete_vertex(&d, &fs, v).unwrap();
            map = map.then(&step);
            d = child;
            fs = child_fs;
        }
        self.fs
            .ids()
            .map(|f| {
                let g = face_containing(&map, f).unwrap();
                let mut bits = 0u64;
                for &dart in fs.boundary(g) {
                    if let shellcert::NodeKind::Vertex(x) = d.node_kind(d.tail(dart)) {
                        bits |= 1 << x;
                    }
                }
                bits
            })
            .collect()
    }

    /// Definition check of a removal chain: each vertex on the face containing
    /// `f` once the base set and the earlier chain vertices are removed.
    pub fn chain_ok(&mut self, base: &[Vertex], chain: &[Vertex], f: FaceId) -> bool {
        let mut removed = base.to_vec();
        for &u in chain {
            if removed.contains(&u) || !self.incident(&removed, f).contains(&u) {
                return false;
            }
            removed.push(u);
        }
        true
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }
}

/// All sequences of `len` distinct vertices from `pool`.
pub fn arrangements(pool: &[Vertex], len: usize) -> Vec<Vec<Vertex>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        let rest: Vec<Vertex> = pool
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &y)| y)
            .collect();
        for mut tail in arrangements(&rest, len - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Exhaustive k-seq-shellability test for one face.
pub fn naive_seq(inc: &mut NaiveIncidence<'_>, f: FaceId, k: usize) -> bool {
    let all: Vec<Vertex> = (0..inc.n()).collect();
    for a in arrangements(&all, k + 1) {
        if !inc.chain_ok(&[], &a, f) {
            continue;
        }
        let mut ok = true;
        for i in 0..=k {
            // S_i lives in D - {a_0..a_{i-1}} and avoids a_0..a_i.
            let base = &a[..i];
            let pool: Vec<Vertex> = all.iter().copied().filter(|v| !a[..=i].contains(v)).collect();
            let found = arrangements(&pool, k - i + 1)
                .into_iter()
                .any(|s| inc.chain_ok(base, &s, f));
            if !found {
                ok = false;
                break;
            }
        }
        if ok {
            return true;
        }
    }
    false
}

/// Exhaustive s-bishellability test for one face.
pub fn naive_bishell(inc: &mut NaiveIncidence<'_>, f: FaceId, s: usize) -> bool {
    let all: Vec<Vertex> = (0..inc.n()).collect();
    let chains: Vec<Vec<Vertex>> = arrangements(&all, s + 1)
        .into_iter()
        .filter(|c| inc.chain_ok(&[], c, f))
        .collect();
    for a in &chains {
        for b in &chains {
            let disjoint = (0..=s).all(|i| a[..=i].iter().all(|x| !b[..=s - i].contains(x)));
            if disjoint {
                return true;
            }
        }
    }
    false
}

pub fn faces_of(d: &Drawing) -> FaceSet {
    trace_faces(d).unwrap()
}

pub fn vset(vs: &[Vertex]) -> VertexSet {
    vs.iter().copied().collect()
}
