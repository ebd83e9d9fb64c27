use serde::{Deserialize, Serialize};

use crate::deletion::delete_vertex;
use crate::drawing::{Drawing, Vertex};
use crate::error::{Error, Result};
use crate::faces::{vertex_set_on_face, FaceId, FaceSet};
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqShellCertificate {
    pub face: FaceId,
    pub k: usize,
    pub a: Vec<Vertex>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<Vertex>>,
    /// Digest of the drawing the certificate was issued for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drawing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BishellCertificate {
    pub face: FaceId,
    #[serde(rename = "k")]
    pub s: usize,
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drawing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    #[serde(rename = "seq-shell")]
    Seq(SeqShellCertificate),
    #[serde(rename = "bishell")]
    Bishell(BishellCertificate),
}

impl Certificate {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }

    pub fn face(&self) -> FaceId {
        match self {
            Certificate::Seq(c) => c.face,
            Certificate::Bishell(c) => c.face,
        }
    }

    pub fn drawing_digest(&self) -> Option<&str> {
        match self {
            Certificate::Seq(c) => c.drawing.as_deref(),
            Certificate::Bishell(c) => c.drawing.as_deref(),
        }
    }
}

impl SeqShellCertificate {
    pub(crate) fn new(face: FaceId, k: usize, a: Vec<Vertex>, s: Vec<Vec<Vertex>>, d: &Drawing) -> Self {
        SeqShellCertificate {
            face,
            k,
            a,
            s,
            drawing: Some(d.digest()),
        }
    }
}

impl BishellCertificate {
    pub(crate) fn new(face: FaceId, s: usize, a: Vec<Vertex>, b: Vec<Vertex>, d: &Drawing) -> Self {
        BishellCertificate {
            face,
            s,
            a,
            b,
            drawing: Some(d.digest()),
        }
    }
}

/// Outcome of a certificate check. Every violation names the condition it breaks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub violations: Vec<String>,
}

impl Verdict {
    fn from(violations: Vec<String>) -> Self {
        Verdict {
            valid: violations.is_empty(),
            violations,
        }
    }
}

/// A drawing shrinking one vertex at a time, tracking the face that contains
/// the reference face. Below three vertices only the vertex set is kept and
/// every remaining vertex counts as incident.
#[derive(Clone)]
struct Shrinking {
    drawing: Option<(Drawing, FaceSet)>,
    face: FaceId,
    remaining: VertexSet,
}

impl Shrinking {
    fn new(d: &Drawing, fs: &FaceSet, f: FaceId) -> Self {
        Shrinking {
            drawing: Some((d.clone(), fs.clone())),
            face: f,
            remaining: d.vertex_set(),
        }
    }

    fn incident(&self) -> Result<VertexSet> {
        match &self.drawing {
            Some((d, fs)) => vertex_set_on_face(d, fs, self.face),
            None => Ok(self.remaining),
        }
    }

    fn remove(&mut self, v: Vertex) -> Result<()> {
        if !self.remaining.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        self.remaining = self.remaining.without(v);
        if self.remaining.len() < 3 {
            self.drawing = None;
        } else if let Some((d, fs)) = &self.drawing {
            let (child, child_faces, map) = delete_vertex(d, fs, v)?;
            self.face = map.apply(self.face);
            self.drawing = Some((child, child_faces));
        }
        Ok(())
    }
}

fn check_common(d: &Drawing, fs: &FaceSet, face: FaceId, digest: Option<&str>, vertices: &[Vertex]) -> Result<()> {
    fs.check(face)?;
    if let Some(&v) = vertices.iter().find(|&&v| !d.has_vertex(v)) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some(expected) = digest {
        if expected != d.digest() {
            return Err(Error::Structure(
                "certificate was issued for a different drawing".into(),
            ));
        }
    }
    Ok(())
}

fn duplicates(seq: &[Vertex]) -> Option<Vertex> {
    let mut seen = VertexSet::empty();
    for &v in seq {
        if seen.contains(v) {
            return Some(v);
        }
        seen.insert(v);
    }
    None
}

/// Checks a removal sequence: each vertex must lie on the face containing the
/// reference face after the earlier ones are removed. Returns the state after
/// removing all of them.
fn check_removal(
    start: &Shrinking,
    seq: &[Vertex],
    label: &str,
    condition: &str,
    out: &mut Vec<String>,
) -> Result<Shrinking> {
    let mut state = start.clone();
    for (i, &v) in seq.iter().enumerate() {
        if !state.incident()?.contains(v) {
            out.push(format!(
                "{condition}: {label}_{i} = {v} is not incident to the face containing the reference face"
            ));
        }
        state.remove(v)?;
    }
    Ok(state)
}

/// Re-checks every condition of a seq-shellability certificate from scratch.
pub fn verify_seq_certificate(d: &Drawing, fs: &FaceSet, cert: &SeqShellCertificate) -> Result<Verdict> {
    let all: Vec<Vertex> = cert.a.iter().chain(cert.s.iter().flatten()).copied().collect();
    check_common(d, fs, cert.face, cert.drawing.as_deref(), &all)?;
    let k = cert.k;
    if k + 2 > d.n() || cert.a.len() != k + 1 || cert.s.len() != k + 1 {
        return Err(Error::Structure(format!(
            "a k = {k} certificate needs k + 1 vertices and k + 1 simple sequences, k <= n - 2"
        )));
    }
    for (i, s) in cert.s.iter().enumerate() {
        if s.len() != k - i + 1 {
            return Err(Error::Structure(format!("S_{i} must have {} vertices", k - i + 1)));
        }
    }
    let mut out = Vec::new();
    if let Some(v) = duplicates(&cert.a) {
        out.push(format!("vertex sequence: {v} appears twice"));
        return Ok(Verdict::from(out));
    }
    let root = Shrinking::new(d, fs, cert.face);
    if !root.incident()?.contains(cert.a[0]) {
        out.push(format!(
            "start: a_0 = {} is not incident to face {}",
            cert.a[0], cert.face
        ));
    }
    let mut state = root;
    for i in 0..=k {
        let ai = cert.a[i];
        if i > 0 && !state.incident()?.contains(ai) {
            out.push(format!(
                "condition 1: a_{i} = {ai} is not incident to the face containing the reference face"
            ));
        }
        let s = &cert.s[i];
        let label = format!("S_{i}");
        let prefix: VertexSet = cert.a[..=i].iter().copied().collect();
        if let Some(&u) = s.iter().find(|&&u| prefix.contains(u)) {
            out.push(format!("condition 2: {label} contains {u}, one of a_0..a_{i}"));
        } else if let Some(u) = duplicates(s) {
            out.push(format!("condition 2: {label} repeats {u}"));
        } else {
            let mut sub = Vec::new();
            check_removal(&state, s, &format!("{label} u"), "condition 2", &mut sub)?;
            out.extend(sub);
        }
        if i < k {
            state.remove(ai)?;
        }
    }
    Ok(Verdict::from(out))
}

/// Re-checks conditions (i) to (iii) of a bishellability certificate.
pub fn verify_bishell_certificate(d: &Drawing, fs: &FaceSet, cert: &BishellCertificate) -> Result<Verdict> {
    let all: Vec<Vertex> = cert.a.iter().chain(&cert.b).copied().collect();
    check_common(d, fs, cert.face, cert.drawing.as_deref(), &all)?;
    let s = cert.s;
    if s + 2 > d.n() || cert.a.len() != s + 1 || cert.b.len() != s + 1 {
        return Err(Error::Structure(format!(
            "an s = {s} certificate needs two sequences of s + 1 vertices, s <= n - 2"
        )));
    }
    let mut out = Vec::new();
    let root = Shrinking::new(d, fs, cert.face);
    for (label, seq, cond) in [("a", &cert.a, "condition (i)"), ("b", &cert.b, "condition (ii)")] {
        match duplicates(seq) {
            Some(v) => out.push(format!("{cond}: {v} appears twice in the {label} sequence")),
            None => {
                check_removal(&root, seq, label, cond, &mut out)?;
            }
        }
    }
    for i in 0..=s {
        let a_prefix: VertexSet = cert.a[..=i].iter().copied().collect();
        let b_prefix: VertexSet = cert.b[..=s - i].iter().copied().collect();
        let common = a_prefix.intersection(b_prefix);
        if !common.is_empty() {
            out.push(format!(
                "condition (iii) at i = {i}: {{a_0..a_{i}}} and {{b_0..b_{}}} share {common:?}",
                s - i
            ));
        }
    }
    Ok(Verdict::from(out))
}

/// Turns an s-bishellability certificate into an s-seq-shellability
/// certificate with the same vertex sequence and `S_i = (b_0, ..., b_{s-i})`.
pub fn bishell_to_seq(cert: &BishellCertificate) -> Result<SeqShellCertificate> {
    let s = cert.s;
    if cert.a.len() != s + 1 || cert.b.len() != s + 1 {
        return Err(Error::Structure(format!(
            "an s = {s} certificate needs two sequences of s + 1 vertices"
        )));
    }
    Ok(SeqShellCertificate {
        face: cert.face,
        k: s,
        a: cert.a.clone(),
        s: (0..=s).map(|i| cert.b[..=s - i].to_vec()).collect(),
        drawing: cert.drawing.clone(),
    })
}
