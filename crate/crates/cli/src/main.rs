use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shellcert::faces::{face_at_point, unbounded_face, vertices_on_face};
use shellcert::generators::{Family, GeneratorSpec, DEFAULT_SCALE};
use shellcert::kedges::{cumulative_bound_check, harary_hill_bound, BoundRow, KEdges};
use shellcert::shellability::{
    bishell_to_seq, decide_bishellable, decide_seq_shellable, verify_bishell_certificate, verify_seq_certificate,
    Certificate,
};
use shellcert::svg::{render_svg, SvgOptions};
use shellcert::{
    load_drawing, trace_faces, validate_goodness, Drawing, Edge, Error, FaceId, FaceSet, ValidationReport,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INVALID: u8 = 2;
const MISMATCH: u8 = 3;
const MISSING: u8 = 4;

#[derive(Parser)]
#[command(
    name = "shellcert",
    version,
    about = "k-edges and shellability certificates for good drawings of K_n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a drawing document and report goodness violations.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a report with face inventory, k-edge profiles and bound checks.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Face id, `auto` for every face, or `at:x,y`.
        #[arg(long, default_value = "auto")]
        face: String,
        /// Largest k in the bound table (default floor(n/2) - 2).
        #[arg(long)]
        kmax: Option<usize>,
        /// Also run both deciders at the default k for every reported face.
        #[arg(long)]
        decide: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for a shellability certificate.
    Decide {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Defaults to floor(n/2) - 2.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "auto")]
        face: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate against a drawing.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Generate a reference drawing as a geometric document.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SCALE)]
        scale: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render or convert a drawing.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        /// Face to highlight in SVG output.
        #[arg(long)]
        face: Option<String>,
        /// Label edges with k-values in SVG output.
        #[arg(long)]
        k_labels: bool,
        /// Certificate whose vertices are highlighted in SVG output.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Seq,
    Bishell,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Combinatorial,
    Geometric,
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::NoGeometry => MISSING,
        _ => INVALID,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        fail(code_for(&e), e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(INVALID, format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(p) => fs::write(p, text).map_err(|e| fail(INVALID, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

/// Loads a drawing and rejects it unless it is good.
fn load_good(path: &Path) -> Result<(Drawing, FaceSet), Failure> {
    let d = load_drawing(&read(path)?)?;
    let report = validate_goodness(&d);
    if !report.pass {
        let list: Vec<String> = report
            .violations
            .iter()
            .map(|v| format!("condition {} on {:?}", v.condition, v.edges))
            .collect();
        return Err(fail(INVALID, format!("drawing is not good: {}", list.join("; "))));
    }
    let fs = trace_faces(&d)?;
    Ok((d, fs))
}

enum FaceSelector {
    Auto,
    Id(FaceId),
    At(f64, f64),
}

fn parse_face(text: &str) -> Result<FaceSelector, Failure> {
    if text == "auto" {
        return Ok(FaceSelector::Auto);
    }
    if let Some(rest) = text.strip_prefix("at:") {
        let coords: Vec<&str> = rest.split(',').collect();
        if let [x, y] = coords[..] {
            if let (Ok(x), Ok(y)) = (x.trim().parse(), y.trim().parse()) {
                return Ok(FaceSelector::At(x, y));
            }
        }
        return Err(fail(INVALID, format!("bad face point {text:?}, expected at:x,y")));
    }
    text.parse::<u32>()
        .map(|id| FaceSelector::Id(FaceId(id)))
        .map_err(|_| fail(INVALID, format!("bad face selector {text:?}")))
}

/// Resolves a selector to a face, or `None` for `auto`.
fn resolve_face(d: &Drawing, fs: &FaceSet, text: &str) -> Result<Option<FaceId>, Failure> {
    match parse_face(text)? {
        FaceSelector::Auto => Ok(None),
        FaceSelector::Id(f) => {
            if !fs.contains(f) {
                return Err(Error::UnknownFace(f.index()).into());
            }
            Ok(Some(f))
        }
        FaceSelector::At(x, y) => Ok(Some(face_at_point(d, fs, x, y)?)),
    }
}

fn default_k(d: &Drawing) -> Result<usize, Failure> {
    (d.n() / 2)
        .checked_sub(2)
        .ok_or_else(|| fail(INVALID, format!("no default k for n = {}; pass --k", d.n())))
}

fn check_k(d: &Drawing, k: usize) -> Result<(), Failure> {
    if k + 2 > d.n() {
        return Err(fail(INVALID, format!("k = {k} exceeds n - 2 = {}", d.n() - 2)));
    }
    Ok(())
}

fn validate(input: &Path, output: Option<&Path>) -> Outcome {
    let d = load_drawing(&read(input)?)?;
    let report = validate_goodness(&d);
    emit(output, &to_json(&report))?;
    Ok(if report.pass { OK } else { NEGATIVE })
}

#[derive(Serialize)]
struct FaceEntry {
    id: FaceId,
    boundary_darts: usize,
    vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unbounded: Option<bool>,
}

#[derive(Serialize)]
struct DeciderOutcome {
    k: usize,
    seq_shellable: bool,
    bishellable: bool,
}

#[derive(Serialize)]
struct FaceProfile {
    face: FaceId,
    k_values: BTreeMap<Edge, usize>,
    counts: Vec<u64>,
    cumulated: Vec<u64>,
    bound: Vec<BoundRow>,
    bound_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    deciders: Option<DeciderOutcome>,
}

#[derive(Serialize)]
struct AnalysisReport {
    format: &'static str,
    version: u32,
    input_digest: String,
    n: usize,
    crossings: usize,
    harary_hill: u64,
    goodness: ValidationReport,
    faces: Vec<FaceEntry>,
    profiles: Vec<FaceProfile>,
}

fn analyze(input: &Path, face: &str, kmax: Option<usize>, decide: bool, output: Option<&Path>) -> Outcome {
    let (d, fs) = load_good(input)?;
    let n = d.n();
    let kmax = match kmax {
        Some(k) if k + 1 > n / 2 => {
            return Err(fail(
                INVALID,
                format!("kmax = {k} exceeds floor(n/2) - 1 = {}", n / 2 - 1),
            ))
        }
        Some(k) => k,
        None => (n / 2).saturating_sub(2),
    };
    let selected: Vec<FaceId> = match resolve_face(&d, &fs, face)? {
        Some(f) => vec![f],
        None => fs.ids().collect(),
    };
    let outer = d.geometry().map(|_| unbounded_face(&d, &fs)).transpose()?;
    let faces = fs
        .ids()
        .map(|f| {
            Ok(FaceEntry {
                id: f,
                boundary_darts: fs.boundary(f).len(),
                vertices: vertices_on_face(&d, &fs, f)?.into_iter().collect(),
                unbounded: outer.map(|o| o == f),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let kd = KEdges::new(&d, &fs)?;
    let mut profiles = Vec::new();
    for f in selected {
        let p = kd.profile(f)?;
        let bound = cumulative_bound_check(&p, kmax);
        let deciders = if decide && n >= 4 {
            let k = n / 2 - 2;
            Some(DeciderOutcome {
                k,
                seq_shellable: decide_seq_shellable(&d, &fs, k, Some(f))?.is_some(),
                bishellable: decide_bishellable(&d, &fs, k, Some(f))?.is_some(),
            })
        } else {
            None
        };
        profiles.push(FaceProfile {
            face: f,
            bound_pass: bound.iter().all(|r| r.pass),
            k_values: p.k_values,
            counts: p.counts,
            cumulated: p.cumulated,
            bound,
            deciders,
        });
    }
    let report = AnalysisReport {
        format: "shellcert-report",
        version: 1,
        input_digest: d.digest(),
        n,
        crossings: d.crossing_count(),
        harary_hill: harary_hill_bound(n as u64),
        goodness: validate_goodness(&d),
        faces,
        profiles,
    };
    emit(output, &to_json(&report))?;
    Ok(OK)
}

fn decide(input: &Path, mode: Mode, k: Option<usize>, face: &str, output: Option<&Path>) -> Outcome {
    let (d, fs) = load_good(input)?;
    let k = match k {
        Some(k) => k,
        None => default_k(&d)?,
    };
    check_k(&d, k)?;
    let filter = resolve_face(&d, &fs, face)?;
    let cert = match mode {
        Mode::Seq => decide_seq_shellable(&d, &fs, k, filter)?.map(Certificate::Seq),
        Mode::Bishell => decide_bishellable(&d, &fs, k, filter)?.map(Certificate::Bishell),
    };
    match cert {
        Some(c) => {
            emit(output, &c.to_json())?;
            Ok(OK)
        }
        None => {
            eprintln!("none: no certificate for k = {k}");
            Ok(NEGATIVE)
        }
    }
}

fn verify(input: &Path, certificate: &Path) -> Outcome {
    let (d, fs) = load_good(input)?;
    let cert = Certificate::parse(&read(certificate)?)?;
    let verdict = match &cert {
        Certificate::Seq(c) => verify_seq_certificate(&d, &fs, c),
        Certificate::Bishell(c) => verify_bishell_certificate(&d, &fs, c),
    }
    .map_err(|e| fail(MISMATCH, e.to_string()))?;
    if verdict.valid {
        eprintln!("verified");
        Ok(OK)
    } else {
        for v in &verdict.violations {
            eprintln!("violation: {v}");
        }
        Ok(NEGATIVE)
    }
}

fn generate(spec: GeneratorSpec, output: Option<&Path>) -> Outcome {
    let doc = spec.document()?;
    emit(output, &doc.to_json())?;
    Ok(OK)
}

fn export(
    input: &Path,
    format: Format,
    face: Option<&str>,
    k_labels: bool,
    certificate: Option<&Path>,
    output: Option<&Path>,
) -> Outcome {
    let d = load_drawing(&read(input)?)?;
    let text = match format {
        Format::Combinatorial => d.to_combinatorial().to_json(),
        Format::Geometric => d
            .to_geometric()
            .map_err(|_| {
                fail(
                    MISSING,
                    "drawing has no geometry; geometric export needs a geometric input",
                )
            })?
            .to_json(),
        Format::Svg => {
            if d.geometry().is_none() {
                return Err(fail(
                    MISSING,
                    "drawing has no geometry; SVG export needs a geometric input such as a generated fixture",
                ));
            }
            let fs = trace_faces(&d)?;
            let highlight = match face {
                Some(text) => match resolve_face(&d, &fs, text)? {
                    Some(f) => Some(f),
                    None => Some(unbounded_face(&d, &fs)?),
                },
                None => None,
            };
            let overlay = match certificate {
                Some(p) => {
                    let cert = Certificate::parse(&read(p)?)?;
                    if cert.drawing_digest().is_some_and(|h| h != d.digest()) {
                        return Err(fail(MISMATCH, "certificate was issued for a different drawing"));
                    }
                    Some(match cert {
                        Certificate::Seq(c) => c,
                        Certificate::Bishell(c) => bishell_to_seq(&c)?,
                    })
                }
                None => None,
            };
            let opts = SvgOptions {
                highlight,
                k_labels,
                overlay,
            };
            render_svg(&d, &fs, &opts)?
        }
    };
    emit(output, &text)?;
    Ok(OK)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { input, output } => validate(&input, output.as_deref()),
        Command::Analyze {
            input,
            face,
            kmax,
            decide: run_deciders,
            output,
        } => analyze(&input, &face, kmax, run_deciders, output.as_deref()),
        Command::Decide {
            input,
            mode,
            k,
            face,
            output,
        } => decide(&input, mode, k, &face, output.as_deref()),
        Command::Verify { input, certificate } => verify(&input, &certificate),
        Command::Generate {
            family,
            n,
            seed,
            scale,
            output,
        } => generate(GeneratorSpec { family, n, seed, scale }, output.as_deref()),
        Command::Export {
            input,
            format,
            face,
            k_labels,
            certificate,
            output,
        } => export(
            &input,
            format,
            face.as_deref(),
            k_labels,
            certificate.as_deref(),
            output.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
