//! k-edges relative to a reference face.
//!
//! Every triple of vertices spans a closed triangle curve. Its two sides are
//! found combinatorially by a breadth-first walk over faces that flips side
//! whenever it steps across a segment of the curve. Side tables are computed
//! once per triple and shared by all edges and all reference faces.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::deletion::{delete_vertex, FaceMap};
use crate::drawing::{Dart, Drawing, Edge, NodeKind, Vertex};
use crate::error::{Error, Result};
use crate::faces::{FaceId, FaceSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    #[must_use]
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }
}

/// Faces on the left of the closed curve `u -> v -> w -> u`.
pub fn triangle_left_faces(d: &Drawing, fs: &FaceSet, u: Vertex, v: Vertex, w: Vertex) -> Result<Vec<bool>> {
    for x in [u, v, w] {
        if !d.has_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    if u == v || v == w || w == u {
        return Err(Error::OutOfRange(format!("triangle {u}, {v}, {w} repeats a vertex")));
    }
    let mut on_curve = vec![false; d.segment_count()];
    for e in [Edge::new(u, v), Edge::new(v, w), Edge::new(w, u)] {
        for &s in d.chain(e) {
            on_curve[s.0 as usize] = true;
        }
    }
    let mut side: Vec<Option<bool>> = vec![None; fs.len()];
    let seed = fs.left_of(d.curve_darts(u, v)[0]);
    side[seed.index()] = Some(true);
    let mut queue = VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        let here = side[f.index()].expect("queued faces have a side");
        for &dart in fs.boundary(f) {
            let g = fs.left_of(dart.rev());
            let there = here ^ on_curve[dart.segment().0 as usize];
            match side[g.index()] {
                None => {
                    side[g.index()] = Some(there);
                    queue.push_back(g);
                }
                Some(s) if s != there => {
                    return Err(Error::InconsistentSides { triangle: [u, v, w] });
                }
                Some(_) => {}
            }
        }
    }
    side.into_iter()
        .map(|s| s.ok_or_else(|| Error::Structure("face graph is disconnected".into())))
        .collect()
}

/// Orientation of triangle `u v w` for directed edge `(u, v)`: plus iff the
/// reference face lies left of the curve `u -> v -> w -> u`.
pub fn triangle_orientation(
    d: &Drawing,
    fs: &FaceSet,
    f: FaceId,
    e: (Vertex, Vertex),
    w: Vertex,
) -> Result<Orientation> {
    fs.check(f)?;
    let left = triangle_left_faces(d, fs, e.0, e.1, w)?;
    Ok(if left[f.index()] {
        Orientation::Plus
    } else {
        Orientation::Minus
    })
}

fn sorted_triple(u: Vertex, v: Vertex, w: Vertex) -> [Vertex; 3] {
    let mut t = [u, v, w];
    t.sort_unstable();
    t
}

/// Side tables of all triangles of one drawing.
#[derive(Clone, Debug)]
pub struct KEdges<'a> {
    d: &'a Drawing,
    fs: &'a FaceSet,
    /// Left faces of `a -> b -> c -> a` for every `a < b < c`.
    left: HashMap<[Vertex; 3], Vec<bool>>,
}

impl<'a> KEdges<'a> {
    pub fn new(d: &'a Drawing, fs: &'a FaceSet) -> Result<Self> {
        let vs: Vec<Vertex> = d.vertices().collect();
        let mut left = HashMap::new();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                for &c in &vs[j + 1..] {
                    left.insert([a, b, c], triangle_left_faces(d, fs, a, b, c)?);
                }
            }
        }
        Ok(KEdges { d, fs, left })
    }

    pub fn drawing(&self) -> &'a Drawing {
        self.d
    }

    pub fn faces(&self) -> &'a FaceSet {
        self.fs
    }

    pub fn orientation(&self, f: FaceId, u: Vertex, v: Vertex, w: Vertex) -> Result<Orientation> {
        self.fs.check(f)?;
        let t = sorted_triple(u, v, w);
        let left = self
            .left
            .get(&t)
            .ok_or_else(|| Error::OutOfRange(format!("{u}, {v}, {w} is not a triangle of the drawing")))?;
        let cyclic = [u, v, w] == t || [v, w, u] == t || [w, u, v] == t;
        Ok(if left[f.index()] == cyclic {
            Orientation::Plus
        } else {
            Orientation::Minus
        })
    }

    /// Number of plus triangles of the edge directed from `lo` to `hi`.
    pub fn plus_count(&self, f: FaceId, e: Edge) -> Result<usize> {
        let mut i = 0;
        for w in self.d.vertices().filter(|&w| !e.has(w)) {
            if self.orientation(f, e.lo(), e.hi(), w)? == Orientation::Plus {
                i += 1;
            }
        }
        Ok(i)
    }

    pub fn k_value(&self, f: FaceId, e: Edge) -> Result<usize> {
        if !self.d.has_vertex(e.lo()) || !self.d.has_vertex(e.hi()) {
            return Err(Error::OutOfRange(format!("edge {e} is not in the drawing")));
        }
        let i = self.plus_count(f, e)?;
        Ok(i.min(self.d.n() - 2 - i))
    }

    pub fn profile(&self, f: FaceId) -> Result<KEdgeProfile> {
        let mut k_values = BTreeMap::new();
        for e in self.d.edges() {
            k_values.insert(e, self.k_value(f, e)?);
        }
        Ok(KEdgeProfile::from_k_values(
            f,
            k_values,
            self.d.n(),
            self.d.crossing_count(),
        ))
    }

    /// Cumulated k-values of the edges at `v`, indexed by k.
    pub fn vertex_profile(&self, f: FaceId, v: Vertex) -> Result<Vec<u64>> {
        if !self.d.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let mut counts = vec![0u64; self.d.n() / 2];
        for w in self.d.vertices().filter(|&w| w != v) {
            counts[self.k_value(f, Edge::new(v, w))?] += 1;
        }
        Ok(cumulate(&counts))
    }
}

/// `sum_{i <= k} (k + 1 - i) * counts[i]`; counts past the end are zero and
/// negative `k` gives 0.
pub fn cumulated_at(counts: &[u64], k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    let k = k as usize;
    counts
        .iter()
        .enumerate()
        .take(k + 1)
        .map(|(i, &c)| (k + 1 - i) as u64 * c)
        .sum()
}

fn cumulate(counts: &[u64]) -> Vec<u64> {
    (0..counts.len()).map(|k| cumulated_at(counts, k as i64)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KEdgeProfile {
    pub reference_face: FaceId,
    pub k_values: BTreeMap<Edge, usize>,
    /// `counts[k]` is the number of k-edges, for k up to floor(n/2) - 1.
    pub counts: Vec<u64>,
    pub cumulated: Vec<u64>,
    pub crossings: usize,
}

impl KEdgeProfile {
    fn from_k_values(f: FaceId, k_values: BTreeMap<Edge, usize>, n: usize, crossings: usize) -> Self {
        let mut counts = vec![0u64; n / 2];
        for &k in k_values.values() {
            counts[k] += 1;
        }
        let cumulated = cumulate(&counts);
        KEdgeProfile {
            reference_face: f,
            k_values,
            counts,
            cumulated,
            crossings,
        }
    }

    pub fn cumulated_at(&self, k: i64) -> u64 {
        cumulated_at(&self.counts, k)
    }
}

pub fn k_value(d: &Drawing, fs: &FaceSet, f: FaceId, e: Edge) -> Result<usize> {
    fs.check(f)?;
    let mut i = 0;
    for w in d.vertices().filter(|&w| !e.has(w)) {
        if triangle_orientation(d, fs, f, (e.lo(), e.hi()), w)? == Orientation::Plus {
            i += 1;
        }
    }
    Ok(i.min(d.n() - 2 - i))
}

pub fn k_edge_profile(d: &Drawing, fs: &FaceSet, f: FaceId) -> Result<KEdgeProfile> {
    fs.check(f)?;
    KEdges::new(d, fs)?.profile(f)
}

pub fn vertex_k_profile(d: &Drawing, fs: &FaceSet, f: FaceId, v: Vertex) -> Result<Vec<u64>> {
    fs.check(f)?;
    KEdges::new(d, fs)?.vertex_profile(f, v)
}

/// Edges at `v` in counterclockwise order, starting right after a sector of
/// `v` that lies in face `f`. One list per such sector; empty if `v` is not on `f`.
pub fn rotation_labelings(d: &Drawing, fs: &FaceSet, f: FaceId, v: Vertex) -> Result<Vec<Vec<Edge>>> {
    fs.check(f)?;
    let x = d.vertex_node(v).ok_or(Error::UnknownVertex(v))?;
    let rot = d.rotation(x);
    let mut out = Vec::new();
    for j in 0..rot.len() {
        // The sector from rot[j] counterclockwise to rot[j + 1] is left of rot[j].
        if fs.left_of(rot[j]) == f {
            out.push((1..=rot.len()).map(|s| d.dart_edge(rot[(j + s) % rot.len()])).collect());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub deleted_vertex: Vertex,
    pub reference_face: FaceId,
    /// The child face containing the reference face.
    pub child_face: FaceId,
    pub parent_k: BTreeMap<Edge, usize>,
    pub child_k: BTreeMap<Edge, usize>,
    pub invariant_edges: BTreeSet<Edge>,
    /// `cumulated[k]` is the number of invariant edges with k-value at most k.
    pub cumulated: Vec<u64>,
}

impl InvariantReport {
    /// Builds the report from k-values on both sides of a deletion and
    /// checks that no k-value grows or drops by more than one.
    pub fn from_profiles(v: Vertex, parent: &KEdgeProfile, child: &KEdgeProfile) -> Result<Self> {
        let mut invariant = BTreeSet::new();
        for (&e, &kc) in &child.k_values {
            let kp = *parent
                .k_values
                .get(&e)
                .ok_or_else(|| Error::Structure(format!("edge {e} of the child is not in the parent")))?;
            if kc != kp && kc + 1 != kp {
                return Err(Error::KValueJump {
                    edge: e,
                    parent: kp,
                    child: kc,
                });
            }
            if kc == kp {
                invariant.insert(e);
            }
        }
        let levels = parent.counts.len();
        let cumulated = (0..levels)
            .map(|k| invariant.iter().filter(|e| parent.k_values[e] <= k).count() as u64)
            .collect();
        Ok(InvariantReport {
            deleted_vertex: v,
            reference_face: parent.reference_face,
            child_face: child.reference_face,
            parent_k: parent.k_values.clone(),
            child_k: child.k_values.clone(),
            invariant_edges: invariant,
            cumulated,
        })
    }

    pub fn cumulated_at(&self, k: usize) -> u64 {
        match self.cumulated.get(k) {
            Some(&c) => c,
            None => self.invariant_edges.len() as u64,
        }
    }

    /// Invariant edges incident to `w`.
    pub fn invariant_at(&self, w: Vertex) -> usize {
        self.invariant_edges.iter().filter(|e| e.has(w)).count()
    }
}

pub fn invariant_edges(
    parent: &KEdges<'_>,
    child: &KEdges<'_>,
    map: &FaceMap,
    f: FaceId,
    v: Vertex,
) -> Result<InvariantReport> {
    let g = crate::deletion::face_containing(map, f)?;
    InvariantReport::from_profiles(v, &parent.profile(f)?, &child.profile(g)?)
}

/// Everything needed to evaluate the deletion recursion at one vertex.
#[derive(Clone, Debug)]
pub struct RecursionTerms {
    pub parent: KEdgeProfile,
    pub child: KEdgeProfile,
    /// Cumulated k-values at the deleted vertex.
    pub vertex: Vec<u64>,
    pub invariants: InvariantReport,
}

impl RecursionTerms {
    /// `E<<k(D) - [E<<k-1(D - v) + E<<k(D, v) + I<k(D, D - v)]`.
    pub fn residual(&self, k: usize) -> i64 {
        let lhs = self.parent.cumulated_at(k as i64) as i64;
        let rhs = self.child.cumulated_at(k as i64 - 1) + self.vertex[k] + self.invariants.cumulated_at(k);
        lhs - rhs as i64
    }
}

pub fn recursion_terms(kd: &KEdges<'_>, f: FaceId, v: Vertex) -> Result<(RecursionTerms, Drawing, FaceSet, FaceMap)> {
    let (child, child_faces, map) = delete_vertex(kd.drawing(), kd.faces(), v)?;
    let terms = {
        let kc = KEdges::new(&child, &child_faces)?;
        let invariants = invariant_edges(kd, &kc, &map, f, v)?;
        RecursionTerms {
            parent: kd.profile(f)?,
            child: kc.profile(map.apply(f))?,
            vertex: kd.vertex_profile(f, v)?,
            invariants,
        }
    };
    Ok((terms, child, child_faces, map))
}

/// Residual of the deletion recursion for the cumulated k-edge count; zero on
/// every good drawing.
pub fn recursion_check(d: &Drawing, fs: &FaceSet, f: FaceId, v: Vertex, k: usize) -> Result<i64> {
    fs.check(f)?;
    let n = d.n();
    if k + 2 > n / 2 {
        return Err(Error::OutOfRange(format!("k = {k} exceeds floor(n/2) - 2 for n = {n}")));
    }
    let kd = KEdges::new(d, fs)?;
    Ok(recursion_terms(&kd, f, v)?.0.residual(k))
}

/// `H(n) = floor(n/2) floor((n-1)/2) floor((n-2)/2) floor((n-3)/2) / 4`.
pub fn harary_hill_bound(n: u64) -> u64 {
    if n < 4 {
        return 0;
    }
    (n / 2) * ((n - 1) / 2) * ((n - 2) / 2) * ((n - 3) / 2) / 4
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub cumulated: u64,
    pub threshold: u64,
    pub pass: bool,
}

/// Compares `E<<k` against `3 C(k+3, 3)` for every `k <= kmax`.
pub fn cumulative_bound_check(profile: &KEdgeProfile, kmax: usize) -> Vec<BoundRow> {
    (0..=kmax)
        .map(|k| {
            let cumulated = profile.cumulated_at(k as i64);
            let threshold = 3 * binomial(k as u64 + 3, 3);
            BoundRow {
                k,
                cumulated,
                threshold,
                pass: cumulated >= threshold,
            }
        })
        .collect()
}

/// Splits the vertices other than `u` and `v` by the closed curve formed by
/// the edge `uv` and a chord through face `f` from `v` back to `u`. Both
/// vertices must lie on `f`. Returns the two class sizes.
pub fn chord_side_counts(d: &Drawing, fs: &FaceSet, f: FaceId, u: Vertex, v: Vertex) -> Result<(usize, usize)> {
    fs.check(f)?;
    let walk = fs.boundary(f);
    let corner = |x: Vertex| {
        walk.iter()
            .position(|&dart| d.node_kind(d.tail(dart)) == NodeKind::Vertex(x))
            .ok_or(Error::NotOnFace {
                vertex: x,
                face: f.index(),
            })
    };
    let (cu, cv) = (corner(u)?, corner(v)?);
    // Darts of the walk from u's corner up to v's corner form one piece of f.
    let mut piece_of = BTreeMap::new();
    let len = walk.len();
    let mut i = cu;
    loop {
        piece_of.insert(walk[i], false);
        i = (i + 1) % len;
        if i == cv {
            break;
        }
    }
    while i != cu {
        piece_of.insert(walk[i], true);
        i = (i + 1) % len;
    }

    // Regions: faces other than f, plus the two pieces of f.
    let region = |dart: Dart| -> usize {
        let g = fs.left_of(dart);
        if g == f {
            fs.len() + usize::from(piece_of[&dart])
        } else {
            g.index()
        }
    };
    let mut on_curve = vec![false; d.segment_count()];
    for &s in d.chain(Edge::new(u, v)) {
        on_curve[s.0 as usize] = true;
    }
    let mut side: Vec<Option<bool>> = vec![None; fs.len() + 2];
    side[fs.len()] = Some(false);
    side[fs.len() + 1] = Some(true);
    let mut queue = VecDeque::from([fs.len(), fs.len() + 1]);
    // Darts bounding each region.
    let mut darts_of: Vec<Vec<Dart>> = vec![Vec::new(); fs.len() + 2];
    for dart in (0..d.dart_count() as u32).map(Dart) {
        darts_of[region(dart)].push(dart);
    }
    while let Some(r) = queue.pop_front() {
        let here = side[r].expect("queued regions have a side");
        for &dart in &darts_of[r] {
            let other = region(dart.rev());
            let there = here ^ on_curve[dart.segment().0 as usize];
            match side[other] {
                None => {
                    side[other] = Some(there);
                    queue.push_back(other);
                }
                Some(s) if s != there => {
                    return Err(Error::Structure(format!(
                        "inconsistent sides for the chord closing edge {u}-{v}"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let mut counts = (0, 0);
    for w in d.vertices().filter(|&w| w != u && w != v) {
        let x = d.vertex_node(w).expect("listed vertex");
        let r = region(d.rotation(x)[0]);
        match side[r] {
            Some(false) => counts.0 += 1,
            Some(true) => counts.1 += 1,
            None => return Err(Error::Structure("face graph is disconnected".into())),
        }
    }
    Ok(counts)
}
