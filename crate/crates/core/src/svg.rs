//! SVG 1.1 rendering of geometric drawings.
//!
//! Vertices are circles, crossings small dots. A certificate overlay draws
//! `a_0` as an unfilled square and the vertices of `S_0` as filled squares.

use std::fmt::Write;

use crate::drawing::{Drawing, NodeKind};
use crate::error::{Error, Result};
use crate::faces::{face_polygon, unbounded_face, FaceId, FaceSet};
use crate::kedges::KEdges;
use crate::shellability::SeqShellCertificate;
use crate::vset::VertexSet;

#[derive(Clone, Debug, Default)]
pub struct SvgOptions {
    pub highlight: Option<FaceId>,
    /// Label every edge with its k-value relative to the highlighted face, or
    /// to the unbounded face if none is highlighted.
    pub k_labels: bool,
    pub overlay: Option<SeqShellCertificate>,
}

fn num(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r:.2}")
    }
}

fn points(path: &[[f64; 2]]) -> String {
    path.iter()
        .map(|p| format!("{},{}", num(p[0]), num(-p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(d: &Drawing, fs: &FaceSet, opts: &SvgOptions) -> Result<String> {
    let g = d.geometry().ok_or(Error::NoGeometry)?;
    let all = g.polylines.values().flatten().map(|p| p.to_f64());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for [x, y] in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    let size = (x1 - x0).max(y1 - y0).max(1.0);
    let pad = size * 0.05;
    let unit = size / 200.0;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        num(x0 - pad),
        num(y0 - pad),
        num(x1 - x0 + 2.0 * pad),
        num(y1 - y0 + 2.0 * pad)
    )
    .unwrap();

    if let Some(f) = opts.highlight {
        let poly = face_polygon(d, fs, f)?;
        writeln!(
            out,
            r##"<polygon class="face" data-face="{}" points="{}" fill="#ffe9a8" stroke="none"/>"##,
            f.0,
            points(&poly)
        )
        .unwrap();
    }

    writeln!(
        out,
        r##"<g class="edges" fill="none" stroke="#333" stroke-width="{}">"##,
        num(unit * 0.6)
    )
    .unwrap();
    for (e, line) in &g.polylines {
        let path: Vec<[f64; 2]> = line.iter().map(|p| p.to_f64()).collect();
        writeln!(out, r#"<polyline data-edge="{e}" points="{}"/>"#, points(&path)).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r##"<g class="crossings" fill="#c0392b">"##).unwrap();
    for (i, kind) in d.nodes().iter().enumerate() {
        if let NodeKind::Crossing(e, f) = kind {
            let [x, y] = g.node_pos[i];
            writeln!(
                out,
                r#"<circle data-edges="{e} {f}" cx="{}" cy="{}" r="{}"/>"#,
                num(x),
                num(-y),
                num(unit * 1.2)
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    if opts.k_labels {
        let face = match opts.highlight {
            Some(f) => f,
            None => unbounded_face(d, fs)?,
        };
        let kd = KEdges::new(d, fs)?;
        let profile = kd.profile(face)?;
        writeln!(
            out,
            r##"<g class="k-labels" font-family="sans-serif" font-size="{}" fill="#1f5fa8" text-anchor="middle">"##,
            num(unit * 5.0)
        )
        .unwrap();
        for (e, k) in &profile.k_values {
            let line = &g.polylines[e];
            let mid = if line.len() > 2 {
                line[line.len() / 2].to_f64()
            } else {
                let (a, b) = (line[0].to_f64(), line[1].to_f64());
                [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
            };
            writeln!(
                out,
                r#"<text data-edge="{e}" x="{}" y="{}">{k}</text>"#,
                num(mid[0]),
                num(-mid[1])
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }

    let (start, filled) = match &opts.overlay {
        Some(c) => (
            c.a.first().copied(),
            c.s.first().map(|s| s.iter().copied().collect()).unwrap_or_default(),
        ),
        None => (None, VertexSet::empty()),
    };
    let r = unit * 3.0;
    writeln!(
        out,
        r##"<g class="vertices" stroke="#000" stroke-width="{}">"##,
        num(unit * 0.6)
    )
    .unwrap();
    for (&v, p) in &g.vertex_pos {
        let [x, y] = p.to_f64();
        if Some(v) == start || filled.contains(v) {
            let fill = if Some(v) == start { "none" } else { "#000" };
            writeln!(
                out,
                r#"<rect data-vertex="{v}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                num(x - r),
                num(-y - r),
                num(2.0 * r),
                num(2.0 * r)
            )
            .unwrap();
        } else {
            writeln!(
                out,
                r##"<circle data-vertex="{v}" cx="{}" cy="{}" r="{}" fill="#fff"/>"##,
                num(x),
                num(-y),
                num(r)
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(
        out,
        r#"<g class="vertex-labels" font-family="sans-serif" font-size="{}">"#,
        num(unit * 6.0)
    )
    .unwrap();
    for (&v, p) in &g.vertex_pos {
        let [x, y] = p.to_f64();
        writeln!(
            out,
            r#"<text x="{}" y="{}">{v}</text>"#,
            num(x + 1.5 * r),
            num(-y - 1.5 * r)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
