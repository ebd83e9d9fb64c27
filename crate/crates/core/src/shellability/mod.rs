//! Simple sequences, seq-shellability and bishellability.
//!
//! All searches run against a [`ShellContext`], which caches the subdrawing
//! `D - X` for every removed vertex set `X` together with the vertices on the
//! face of `D - X` containing each face of `D`. Deleting a vertex only merges
//! faces, so incidence to the face containing `F` is monotone in `X`.

mod certificate;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

pub use certificate::{
    bishell_to_seq, verify_bishell_certificate, verify_seq_certificate, BishellCertificate, Certificate,
    SeqShellCertificate, Verdict,
};

use crate::deletion::{delete_vertex, FaceMap};
use crate::drawing::{Drawing, Vertex};
use crate::error::{Error, Result};
use crate::faces::{vertex_set_on_face, FaceId, FaceSet};
use crate::vset::VertexSet;

struct Sub {
    /// Absent once fewer than three vertices remain.
    drawing: Option<(Drawing, FaceSet)>,
    to_sub: FaceMap,
    /// Vertices on the face containing each root face.
    incident: Vec<VertexSet>,
}

/// Cache of subdrawings of one drawing, keyed by the removed vertex set.
pub struct ShellContext<'a> {
    root: &'a Drawing,
    root_faces: &'a FaceSet,
    subs: RefCell<HashMap<VertexSet, Rc<Sub>>>,
}

impl<'a> ShellContext<'a> {
    pub fn new(root: &'a Drawing, root_faces: &'a FaceSet) -> Self {
        ShellContext {
            root,
            root_faces,
            subs: RefCell::new(HashMap::new()),
        }
    }

    pub fn drawing(&self) -> &'a Drawing {
        self.root
    }

    pub fn faces(&self) -> &'a FaceSet {
        self.root_faces
    }

    fn sub(&self, removed: VertexSet) -> Result<Rc<Sub>> {
        if let Some(s) = self.subs.borrow().get(&removed) {
            return Ok(Rc::clone(s));
        }
        let all = self.root.vertex_set();
        if !removed.difference(all).is_empty() {
            let v = removed.difference(all).iter().next().expect("nonempty");
            return Err(Error::UnknownVertex(v));
        }
        let remaining = all.difference(removed);
        let sub = match removed.max() {
            None => {
                let d = self.root.clone();
                let fs = self.root_faces.clone();
                let incident = fs
                    .ids()
                    .map(|f| vertex_set_on_face(&d, &fs, f))
                    .collect::<Result<_>>()?;
                Sub {
                    drawing: Some((d, fs)),
                    to_sub: FaceMap::identity(self.root_faces.len()),
                    incident,
                }
            }
            Some(_) if remaining.len() < 3 => Sub {
                drawing: None,
                to_sub: FaceMap::identity(0),
                incident: vec![remaining; self.root_faces.len()],
            },
            Some(v) => {
                let parent = self.sub(removed.without(v))?;
                let (pd, pfs) = parent.drawing.as_ref().expect("parent has at least four vertices");
                let (d, fs, map) = delete_vertex(pd, pfs, v)?;
                let to_sub = parent.to_sub.then(&map);
                let per_face: Vec<VertexSet> = fs
                    .ids()
                    .map(|g| vertex_set_on_face(&d, &fs, g))
                    .collect::<Result<_>>()?;
                let incident = self
                    .root_faces
                    .ids()
                    .map(|f| per_face[to_sub.apply(f).index()])
                    .collect();
                Sub {
                    drawing: Some((d, fs)),
                    to_sub,
                    incident,
                }
            }
        };
        let sub = Rc::new(sub);
        self.subs.borrow_mut().insert(removed, Rc::clone(&sub));
        Ok(sub)
    }

    /// Vertices of `D - removed` on the face that contains root face `f`.
    pub fn incident(&self, removed: VertexSet, f: FaceId) -> Result<VertexSet> {
        self.root_faces.check(f)?;
        Ok(self.sub(removed)?.incident[f.index()])
    }

    /// The subdrawing `D - removed` and the face containing root face `f`,
    /// or `None` once fewer than three vertices remain.
    pub fn subdrawing(&self, removed: VertexSet, f: FaceId) -> Result<Option<(Drawing, FaceSet, FaceId)>> {
        self.root_faces.check(f)?;
        let sub = self.sub(removed)?;
        Ok(sub
            .drawing
            .as_ref()
            .map(|(d, fs)| (d.clone(), fs.clone(), sub.to_sub.apply(f))))
    }

    /// Simple sequence of length `len` in `D - removed` avoiding `forbidden`.
    ///
    /// Tries the ascending greedy choice first and backtracks over all
    /// incident vertices, remembering failed states.
    pub fn simple_sequence(
        &self,
        f: FaceId,
        removed: VertexSet,
        forbidden: VertexSet,
        len: usize,
    ) -> Result<Option<Vec<Vertex>>> {
        let mut failed = HashSet::new();
        let mut seq = Vec::with_capacity(len);
        if self.extend_simple(f, removed, forbidden, len, &mut seq, &mut failed)? {
            Ok(Some(seq))
        } else {
            Ok(None)
        }
    }

    fn extend_simple(
        &self,
        f: FaceId,
        removed: VertexSet,
        forbidden: VertexSet,
        len: usize,
        seq: &mut Vec<Vertex>,
        failed: &mut HashSet<VertexSet>,
    ) -> Result<bool> {
        if seq.len() == len {
            return Ok(true);
        }
        if failed.contains(&removed) {
            return Ok(false);
        }
        let candidates = self.incident(removed, f)?.difference(forbidden);
        // Counting bound: at most this many vertices can still be used.
        let budget = self.root.vertex_set().difference(removed).difference(forbidden).len();
        if budget >= len - seq.len() {
            for u in candidates.iter() {
                seq.push(u);
                if self.extend_simple(f, removed.with(u), forbidden, len, seq, failed)? {
                    return Ok(true);
                }
                seq.pop();
            }
        }
        failed.insert(removed);
        Ok(false)
    }
}

/// A simple sequence of `owner` with respect to some reference face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSequence {
    pub owner: Vertex,
    pub sequence: Vec<Vertex>,
}

/// Searches for a simple sequence of `v` of length `len` whose vertices avoid
/// `excluded`. `v` must lie on `f`.
pub fn find_simple_sequence(
    d: &Drawing,
    fs: &FaceSet,
    f: FaceId,
    v: Vertex,
    len: usize,
    excluded: VertexSet,
) -> Result<Option<SimpleSequence>> {
    let ctx = ShellContext::new(d, fs);
    find_simple_sequence_in(&ctx, f, v, len, excluded)
}

pub fn find_simple_sequence_in(
    ctx: &ShellContext<'_>,
    f: FaceId,
    v: Vertex,
    len: usize,
    excluded: VertexSet,
) -> Result<Option<SimpleSequence>> {
    if !ctx.drawing().has_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    if !ctx.incident(VertexSet::empty(), f)?.contains(v) {
        return Err(Error::NotOnFace {
            vertex: v,
            face: f.index(),
        });
    }
    if len == 0 {
        return Err(Error::OutOfRange("a simple sequence has at least one vertex".into()));
    }
    let forbidden = excluded.with(v);
    Ok(ctx
        .simple_sequence(f, VertexSet::empty(), forbidden, len)?
        .map(|sequence| SimpleSequence { owner: v, sequence }))
}

fn check_k(d: &Drawing, k: usize, what: &str) -> Result<()> {
    if k + 2 > d.n() {
        return Err(Error::OutOfRange(format!("{what} = {k} exceeds n - 2 = {}", d.n() - 2)));
    }
    Ok(())
}

fn faces_to_try(fs: &FaceSet, filter: Option<FaceId>) -> Result<Vec<FaceId>> {
    match filter {
        Some(f) => {
            fs.check(f)?;
            Ok(vec![f])
        }
        None => Ok(fs.ids().collect()),
    }
}

/// Searches all faces (or one) for a k-seq-shellability certificate.
pub fn decide_seq_shellable(
    d: &Drawing,
    fs: &FaceSet,
    k: usize,
    face_filter: Option<FaceId>,
) -> Result<Option<SeqShellCertificate>> {
    check_k(d, k, "k")?;
    let ctx = ShellContext::new(d, fs);
    for f in faces_to_try(fs, face_filter)? {
        if let Some(cert) = decide_seq_for_face(&ctx, f, k)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

pub fn decide_seq_for_face(ctx: &ShellContext<'_>, f: FaceId, k: usize) -> Result<Option<SeqShellCertificate>> {
    check_k(ctx.drawing(), k, "k")?;
    let mut failed = HashSet::new();
    let mut a = Vec::new();
    let mut s = Vec::new();
    if seq_step(ctx, f, VertexSet::empty(), k, &mut a, &mut s, &mut failed)? {
        Ok(Some(SeqShellCertificate::new(f, k, a, s, ctx.drawing())))
    } else {
        Ok(None)
    }
}

/// `D - removed` is `r`-seq-shellable with respect to the face containing `f`.
fn seq_step(
    ctx: &ShellContext<'_>,
    f: FaceId,
    removed: VertexSet,
    r: usize,
    a: &mut Vec<Vertex>,
    s: &mut Vec<Vec<Vertex>>,
    failed: &mut HashSet<(VertexSet, usize)>,
) -> Result<bool> {
    if failed.contains(&(removed, r)) {
        return Ok(false);
    }
    for v in ctx.incident(removed, f)?.iter() {
        let Some(seq) = ctx.simple_sequence(f, removed, removed.with(v), r + 1)? else {
            continue;
        };
        a.push(v);
        s.push(seq);
        if r == 0 || seq_step(ctx, f, removed.with(v), r - 1, a, s, failed)? {
            return Ok(true);
        }
        a.pop();
        s.pop();
    }
    failed.insert((removed, r));
    Ok(false)
}

/// Searches all faces (or one) for an s-bishellability certificate.
pub fn decide_bishellable(
    d: &Drawing,
    fs: &FaceSet,
    s: usize,
    face_filter: Option<FaceId>,
) -> Result<Option<BishellCertificate>> {
    check_k(d, s, "s")?;
    let ctx = ShellContext::new(d, fs);
    for f in faces_to_try(fs, face_filter)? {
        if let Some(cert) = decide_bishell_for_face(&ctx, f, s)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Vertex sets that some valid removal sequence exhausts, grouped by size,
/// each with one such sequence.
fn shelling_sets(ctx: &ShellContext<'_>, f: FaceId, size: usize) -> Result<BTreeMap<VertexSet, Vec<Vertex>>> {
    let mut level: BTreeMap<VertexSet, Vec<Vertex>> = BTreeMap::new();
    level.insert(VertexSet::empty(), Vec::new());
    for _ in 0..size {
        let mut next = BTreeMap::new();
        for (set, seq) in &level {
            for v in ctx.incident(*set, f)?.iter() {
                next.entry(set.with(v)).or_insert_with(|| {
                    let mut s = seq.clone();
                    s.push(v);
                    s
                });
            }
        }
        level = next;
    }
    Ok(level)
}

/// Decides bishellability for one face.
///
/// Condition (iii) only relates the prefix sets `A_i = {a_0..a_i}` and
/// `B_{s-i} = {b_0..b_{s-i}}`, and both incidence conditions only depend on
/// prefix sets. The search therefore walks the staircase of pairs
/// `(A_i, B_{s-i})`: it grows `A` by one valid vertex and shrinks `B` by
/// peeling a vertex that could have been the last one added.
pub fn decide_bishell_for_face(ctx: &ShellContext<'_>, f: FaceId, s: usize) -> Result<Option<BishellCertificate>> {
    check_k(ctx.drawing(), s, "s")?;
    let tops = shelling_sets(ctx, f, s + 1)?;
    let mut failed = HashSet::new();
    for a0 in ctx.incident(VertexSet::empty(), f)?.iter() {
        for &top in tops.keys() {
            if top.contains(a0) {
                continue;
            }
            let mut a = vec![a0];
            let mut peeled = Vec::new();
            if staircase(ctx, f, VertexSet::singleton(a0), top, &mut a, &mut peeled, &mut failed)? {
                // peeled holds b_s, ..., b_1 and the final set is {b_0}.
                let rest = top.difference(peeled.iter().copied().collect());
                let mut b: Vec<Vertex> = rest.iter().collect();
                b.extend(peeled.iter().rev());
                return Ok(Some(BishellCertificate::new(f, s, a, b, ctx.drawing())));
            }
        }
    }
    Ok(None)
}

fn staircase(
    ctx: &ShellContext<'_>,
    f: FaceId,
    a_set: VertexSet,
    b_set: VertexSet,
    a: &mut Vec<Vertex>,
    peeled: &mut Vec<Vertex>,
    failed: &mut HashSet<(VertexSet, VertexSet)>,
) -> Result<bool> {
    if b_set.len() == 1 {
        return Ok(!ctx.incident(VertexSet::empty(), f)?.is_disjoint(b_set));
    }
    if failed.contains(&(a_set, b_set)) {
        return Ok(false);
    }
    let grow = ctx.incident(a_set, f)?;
    for b in b_set.iter() {
        let rest = b_set.without(b);
        if !ctx.incident(rest, f)?.contains(b) {
            continue;
        }
        for next in grow.difference(rest).iter() {
            a.push(next);
            peeled.push(b);
            if staircase(ctx, f, a_set.with(next), rest, a, peeled, failed)? {
                return Ok(true);
            }
            a.pop();
            peeled.pop();
        }
    }
    failed.insert((a_set, b_set));
    Ok(false)
}
