use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn shellcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, family: &str, n: usize, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{family}-{n}.json"));
    let n = n.to_string();
    let mut args = vec!["generate", "--family", family, "--n", &n, "--output", path_str(&path)];
    args.extend_from_slice(extra);
    let out = shellcert(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_cylindrical_six() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "cylindrical", 6, &[]);
    let report = dir.path().join("report.json");
    let out = shellcert(&[
        "analyze",
        "--input",
        path_str(&input),
        "--face",
        "auto",
        "--output",
        path_str(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = json(&report);
    assert_eq!(r["format"], "shellcert-report");
    assert_eq!(r["crossings"], 3);
    assert_eq!(r["harary_hill"], 3);
    let profiles = r["profiles"].as_array().unwrap();
    assert_eq!(profiles.len(), r["faces"].as_array().unwrap().len());
    assert!(profiles.iter().any(|p| p["bound_pass"] == true));
}

#[test]
fn analyze_convex_five_outer_face() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "convex", 5, &["--scale", "1000"]);
    let out = shellcert(&[
        "analyze",
        "--input",
        path_str(&input),
        "--face",
        "at:5000,5000",
        "--kmax",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = &r["profiles"][0];
    assert_eq!(p["cumulated"][1], 15);
    assert_eq!(p["k_values"]["0-1"], 0);
    assert_eq!(p["k_values"]["0-2"], 1);
    assert_eq!(p["bound"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_with_deciders_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "rectilinear-random", 7, &["--seed", "4"]);
    let a = shellcert(&["analyze", "--input", path_str(&input), "--decide"]);
    let b = shellcert(&["analyze", "--input", path_str(&input), "--decide"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(r["profiles"][0]["deciders"]["k"].is_number());
}

#[test]
fn malformed_input_is_rejected_without_output() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"format":"shellcert-drawing","version":1,"mode":"geometric","n":3}"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = shellcert(&["analyze", "--input", path_str(&bad), "--output", path_str(&report)]);
    assert_eq!(code(&out), 2);
    assert!(!report.exists());
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn non_good_drawing_is_rejected() {
    let dir = TempDir::new().unwrap();
    let doc = dir.path().join("twice.json");
    fs::write(
        &doc,
        r#"{"format":"shellcert-drawing","version":1,"mode":"geometric","n":4,
        "vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":10,"y":0},{"id":2,"x":3,"y":5},{"id":3,"x":7,"y":5}],
        "edges":[{"u":0,"v":1,"polyline":[[0,0],[10,0]]},
                 {"u":2,"v":3,"polyline":[[3,5],[3,-3],[7,-3],[7,5]]},
                 {"u":0,"v":2,"polyline":[[0,0],[3,5]]},
                 {"u":0,"v":3,"polyline":[[0,0],[0,8],[7,8],[7,5]]},
                 {"u":1,"v":2,"polyline":[[10,0],[10,10],[3,10],[3,5]]},
                 {"u":1,"v":3,"polyline":[[10,0],[7,5]]}]}"#,
    )
    .unwrap();
    let out = shellcert(&["validate", "--input", path_str(&doc)]);
    assert_eq!(code(&out), 1);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["pass"], false);
    assert_eq!(r["violations"][0]["condition"], 4);
    let out = shellcert(&["decide", "--input", path_str(&doc), "--mode", "seq", "--k", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn decide_and_verify_convex_ten() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "convex", 10, &[]);
    let seq = dir.path().join("seq.json");
    let out = shellcert(&[
        "decide",
        "--input",
        path_str(&input),
        "--mode",
        "seq",
        "--output",
        path_str(&seq),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cert = json(&seq);
    assert_eq!(cert["kind"], "seq-shell");
    assert_eq!(cert["k"], 3);
    let out = shellcert(&["verify", "--input", path_str(&input), "--certificate", path_str(&seq)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let bi = dir.path().join("bishell.json");
    let out = shellcert(&[
        "decide",
        "--input",
        path_str(&input),
        "--mode",
        "bishell",
        "--k",
        "3",
        "--output",
        path_str(&bi),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&bi)["kind"], "bishell");
    let out = shellcert(&["verify", "--input", path_str(&input), "--certificate", path_str(&bi)]);
    assert_eq!(code(&out), 0);

    let out = shellcert(&["decide", "--input", path_str(&input), "--mode", "seq", "--k", "9"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tampered_and_foreign_certificates() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "convex", 8, &[]);
    let cert = dir.path().join("cert.json");
    let out = shellcert(&[
        "decide",
        "--input",
        path_str(&input),
        "--mode",
        "seq",
        "--output",
        path_str(&cert),
    ]);
    assert_eq!(code(&out), 0);

    let mut c = json(&cert);
    let a0 = c["a"][0].clone();
    c["S"][0][0] = a0;
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, c.to_string()).unwrap();
    let out = shellcert(&[
        "verify",
        "--input",
        path_str(&input),
        "--certificate",
        path_str(&tampered),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("condition 2"));

    let other = generate(&dir, "cylindrical", 8, &[]);
    let out = shellcert(&["verify", "--input", path_str(&other), "--certificate", path_str(&cert)]);
    assert_eq!(code(&out), 3);

    let mut c = json(&cert);
    c["a"][1] = Value::from(40);
    c.as_object_mut().unwrap().remove("drawing");
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, c.to_string()).unwrap();
    let out = shellcert(&[
        "verify",
        "--input",
        path_str(&input),
        "--certificate",
        path_str(&unknown),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn decide_reports_none() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "convex", 6, &[]);
    let report = shellcert(&["analyze", "--input", path_str(&input)]);
    let r: Value = serde_json::from_slice(&report.stdout).unwrap();
    // A face touching no vertex has no admissible a_0.
    let empty = r["faces"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["vertices"].as_array().unwrap().is_empty())
        .expect("convex K6 has a face without vertices")["id"]
        .to_string();
    let out = shellcert(&["decide", "--input", path_str(&input), "--mode", "seq", "--face", &empty]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("none"));
    assert!(out.stdout.is_empty());
    let out = shellcert(&[
        "decide",
        "--input",
        path_str(&input),
        "--mode",
        "bishell",
        "--face",
        &empty,
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn generate_is_deterministic_for_all_families() {
    for (family, n, extra) in [
        ("convex", 7, vec![]),
        ("cylindrical", 9, vec![]),
        ("rectilinear-random", 7, vec!["--seed", "12"]),
    ] {
        let n = n.to_string();
        let mut args = vec!["generate", "--family", family, "--n", &n];
        args.extend(extra);
        let a = shellcert(&args);
        let b = shellcert(&args);
        assert_eq!(code(&a), 0, "{family}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
        let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(doc["mode"], "geometric");
    }
    let out = shellcert(&["generate", "--family", "spiral", "--n", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn export_svg_with_labels_and_overlay() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "cylindrical", 6, &[]);
    let svg = dir.path().join("k6.svg");
    let out = shellcert(&[
        "export",
        "--input",
        path_str(&input),
        "--k-labels",
        "--output",
        path_str(&svg),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"version="1.1""#));
    assert_eq!(text.matches("<polyline ").count(), 15);
    assert_eq!(text.matches("data-edges=").count(), 3);

    let cert = dir.path().join("cert.json");
    assert_eq!(
        code(&shellcert(&[
            "decide",
            "--input",
            path_str(&input),
            "--mode",
            "seq",
            "--output",
            path_str(&cert)
        ])),
        0
    );
    let c = json(&cert);
    let out = shellcert(&[
        "export",
        "--input",
        path_str(&input),
        "--certificate",
        path_str(&cert),
        "--face",
        "auto",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let a0 = c["a"][0].as_u64().unwrap();
    assert!(text.contains(&format!(r#"<rect data-vertex="{a0}""#)));
    assert!(text.contains(r#"fill="none"/>"#));
    for u in c["S"][0].as_array().unwrap() {
        assert!(text.contains(&format!(r#"<rect data-vertex="{u}""#)));
    }
    assert_eq!(text.matches("<rect ").count(), 1 + c["S"][0].as_array().unwrap().len());
}

#[test]
fn export_without_geometry_is_refused() {
    let dir = TempDir::new().unwrap();
    let input = generate(&dir, "convex", 5, &[]);
    let comb = dir.path().join("comb.json");
    let out = shellcert(&[
        "export",
        "--input",
        path_str(&input),
        "--format",
        "combinatorial",
        "--output",
        path_str(&comb),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&comb)["mode"], "combinatorial");
    let out = shellcert(&["export", "--input", path_str(&comb), "--format", "svg"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("geometry"));
    let out = shellcert(&["export", "--input", path_str(&comb), "--format", "geometric"]);
    assert_eq!(code(&out), 4);
    let out = shellcert(&["analyze", "--input", path_str(&comb), "--face", "at:0,0"]);
    assert_eq!(code(&out), 4);
    let out = shellcert(&["analyze", "--input", path_str(&comb)]);
    assert_eq!(code(&out), 0);
}
