//! Subcommands and their exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use legreal_core::curve_model::{parse_curve, validate_curve, CurveOnRibbon};
use legreal_core::front_model::{
    check_embedded_diagram, check_generic, closure_integral, crossings, rational, rotation_number,
    thurston_bennequin, writhe, FrontDiagram, Violation,
};
use legreal_core::legendrian_graph::{parse_graph, GraphError, LegendrianGraphFront};
use legreal_core::openbook::{compile, parse_open_book, OpenBookError, SurgeryDiagram};
use legreal_core::realizer::{realize, RealizeError, Realization, RealizerParams};
use legreal_core::ribbon::{build_ribbon, pass_parity, render_ribbon_front, z2_homology_oracle};

use crate::render::{render_svg, Overlay, RenderStyle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_GENERICITY: i32 = 2;
pub const EXIT_TRIVIAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "legreal", version, about = "Legendrian realization of curves on ribbons of Legendrian graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Default)]
pub struct RealizeOpts {
    /// Vertical unit, as `a/b` or a decimal; shrunk if too large.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Micro-offset unit; shrunk if too large.
    #[arg(long)]
    pub mu: Option<String>,
    /// Index of the pass used as the first segment.
    #[arg(long)]
    pub start_pass: Option<usize>,
    /// Traverse the curve backwards.
    #[arg(long)]
    pub reverse: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check LGF, CRV, OBK and front documents; a CRV is checked against the last LGF before it.
    Validate { paths: Vec<PathBuf> },
    /// Realize a curve on the ribbon of a graph front.
    Realize {
        graph: Option<PathBuf>,
        curve: Option<PathBuf>,
        /// Directory of `NAME.lgf.json` / `NAME.crv.json` pairs.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        opts: RealizeOpts,
        #[arg(long)]
        svg: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compile an open book into a contact surgery diagram.
    Compile {
        spec: PathBuf,
        #[command(flatten)]
        opts: RealizeOpts,
        #[arg(long)]
        svg: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Classical invariants of every component of a front or surgery diagram.
    Invariants { path: PathBuf },
    /// Draw a graph front, front or surgery diagram as SVG.
    Render {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_shading: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Curve(#[from] legreal_core::curve_model::CurveError),
    #[error("{0}")]
    Realize(#[from] RealizeError),
    #[error("{0}")]
    OpenBook(#[from] OpenBookError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Graph(GraphError::Genericity(_)) => EXIT_GENERICITY,
            CliError::Realize(RealizeError::Graph(GraphError::Genericity(_))) => EXIT_GENERICITY,
            CliError::Realize(RealizeError::NoOddHandle { .. }) => EXIT_TRIVIAL,
            CliError::OpenBook(OpenBookError::HomologicallyTrivialWordCurve { .. }) => EXIT_TRIVIAL,
            _ => EXIT_ERROR,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    name.split('.').next().unwrap_or("out").to_string()
}

fn params(opts: &RealizeOpts) -> Result<RealizerParams, CliError> {
    let parse = |s: &Option<String>, what: &str| -> Result<_, CliError> {
        s.as_ref()
            .map(|t| rational::parse_decimal(t).ok_or_else(|| CliError::Usage(format!("bad {what} value {t:?}"))))
            .transpose()
    };
    Ok(RealizerParams {
        epsilon: parse(&opts.epsilon, "epsilon")?,
        mu: parse(&opts.mu, "mu")?,
        start_pass: opts.start_pass,
        reverse: opts.reverse,
        ..RealizerParams::default()
    })
}

fn violation_entries(v: &[Violation]) -> Vec<Value> {
    v.iter()
        .map(|x| json!({ "kind": x.kind, "label": x.kind.label(), "at": x.at.to_string(), "detail": x.detail }))
        .collect()
}

fn format_of(v: &Value) -> String {
    match v.get("format").and_then(Value::as_str) {
        Some(f) => f.to_string(),
        None if v.get("strands").is_some() => "FRONT".into(),
        None => "UNKNOWN".into(),
    }
}

struct Validation {
    code: i32,
    entries: Vec<Value>,
}

fn validate_one(path: &Path, graph: &mut Option<LegendrianGraphFront>) -> Result<(String, Validation), CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let format = format_of(&value);
    let ok = Validation { code: EXIT_OK, entries: vec![] };
    let v = match format.as_str() {
        "LGF" => match parse_graph(&text) {
            Ok(g) => {
                *graph = Some(g);
                ok
            }
            Err(GraphError::Genericity(v)) => Validation { code: EXIT_GENERICITY, entries: violation_entries(&v) },
            Err(e) => Validation { code: EXIT_ERROR, entries: vec![json!({ "kind": "schema", "detail": e.to_string() })] },
        },
        "CRV" => {
            let curve = parse_curve(&text)?;
            let g = graph.as_ref().ok_or_else(|| CliError::Usage("a CRV document needs an LGF document before it".into()))?;
            check_curve(g, &curve)
        }
        "OBK" => {
            let spec = parse_open_book(&text)?;
            match compile(&spec, &RealizerParams::default()) {
                Ok(_) => ok,
                Err(e @ OpenBookError::HomologicallyTrivialWordCurve { .. }) => Validation {
                    code: EXIT_TRIVIAL,
                    entries: vec![json!({ "kind": "homologically_trivial", "detail": e.to_string() })],
                },
                Err(e) => Validation { code: EXIT_ERROR, entries: vec![json!({ "kind": "compile", "detail": e.to_string() })] },
            }
        }
        "FRONT" => {
            let d: FrontDiagram = serde_json::from_value(value)?;
            let r = check_generic(&d);
            let mut entries = violation_entries(&r.violations);
            if !check_embedded_diagram(&d) {
                entries.push(json!({ "kind": "not_embedded", "detail": "the Legendrian lift has a double point" }));
            }
            Validation { code: if entries.is_empty() { EXIT_OK } else { EXIT_GENERICITY }, entries }
        }
        other => Validation {
            code: EXIT_ERROR,
            entries: vec![json!({ "kind": "schema", "detail": format!("unknown document format {other}") })],
        },
    };
    Ok((format, v))
}

fn check_curve(g: &LegendrianGraphFront, curve: &CurveOnRibbon) -> Validation {
    let r = build_ribbon(g);
    let report = validate_curve(&r, curve);
    if !report.is_valid() {
        let entries = report.errors.iter().map(|e| json!({ "kind": "curve", "detail": e.to_string() })).collect();
        return Validation { code: EXIT_ERROR, entries };
    }
    let class = pass_parity(&r, curve);
    if class.is_zero() {
        let counts = curve.handle_counts(r.one_handles.len());
        let oracle = z2_homology_oracle(&r, curve);
        return Validation {
            code: EXIT_TRIVIAL,
            entries: vec![json!({
                "kind": "homologically_trivial",
                "detail": "every cocore is crossed an even number of times",
                "cocore_counts": counts,
                "z2_class_nonzero": oracle.nontrivial,
            })],
        };
    }
    Validation { code: EXIT_OK, entries: vec![] }
}

fn severity(code: i32) -> u8 {
    match code {
        EXIT_ERROR => 3,
        EXIT_GENERICITY => 2,
        EXIT_TRIVIAL => 1,
        _ => 0,
    }
}

fn summary(r: &Realization) -> String {
    let rep = &r.report;
    let p = &rep.plan;
    let gains: Vec<String> = p.gains.entries.iter().map(|e| rational::display(&e.gain)).collect();
    let prom: Vec<String> = p.prominence.start.iter().map(rational::display).collect();
    [
        format!("segments: {}", p.segments.len()),
        format!("distinguished handle: {}", p.distinguished_handle),
        format!("theta before balancing: {}", rational::display(&p.theta)),
        format!("gains: [{}]", gains.join(", ")),
        format!("prominence: [{}]", prom.join(", ")),
        format!("epsilon: {}  mu: {}  attempts: {}", rational::display(&rep.epsilon), rational::display(&rep.mu), rep.attempts),
        format!("tb: {}  rot: {}  crossings: {}  cusps: {}", rep.tb, rep.rot, rep.crossings, rep.cusps),
        format!(
            "closed: {}  closure integral: {}  generic: {}  embedded: {}  itinerary: {}",
            rep.endpoint_match,
            rational::display(&rep.closure_integral),
            rep.generic.is_clean(),
            rep.embedded,
            rep.itinerary_matches
        ),
        format!("clean: {}", rep.is_clean()),
    ]
    .join("\n")
}

fn realize_pair(
    graph: &Path,
    curve: &Path,
    opts: &RealizeOpts,
    svg: bool,
    out_dir: &Path,
) -> Result<(String, Realization), CliError> {
    let g = parse_graph(&read(graph)?)?;
    let c = parse_curve(&read(curve)?)?;
    let r = realize(&g, &c, &params(opts)?)?;
    let name = stem(curve);
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.display().to_string(), source })?;
    write(&out_dir.join(format!("{name}.front.json")), &r.diagram().to_json())?;
    write(&out_dir.join(format!("{name}.report.json")), &serde_json::to_string_pretty(&r.report)?)?;
    if svg {
        let overlay = Overlay { shading: render_ribbon_front(&g, None).strands, ..Overlay::default() };
        write(&out_dir.join(format!("{name}.svg")), &render_svg(&r.diagram(), &RenderStyle::default(), &overlay))?;
    }
    Ok((name, r))
}

fn surgery_svg(d: &SurgeryDiagram) -> String {
    let labels = d
        .components
        .iter()
        .map(|c| {
            let top = c.knot.points.iter().max_by(|a, b| a.z.cmp(&b.z)).cloned().expect("non-empty knot");
            (top, format!("{} ({:+})", c.name, c.coefficient))
        })
        .collect();
    render_svg(&d.front(), &RenderStyle::default(), &Overlay { labels, ..Overlay::default() })
}

fn invariants(d: &FrontDiagram) -> Value {
    let comps: Vec<Value> = d
        .strands
        .iter()
        .map(|s| {
            let tb = thurston_bennequin(s).ok();
            let rot = rotation_number(s).ok();
            let wr = writhe(s).ok();
            json!({
                "closed": s.closed,
                "tb": tb,
                "rot": rot,
                "writhe": wr,
                "cusps": s.cusps.len(),
                "closure_integral": rational::encode(&closure_integral(s)),
                "closure_zero": closure_integral(s) == rational::q(0),
            })
        })
        .collect();
    json!({ "components": d.strands.len(), "crossings": crossings(d).len(), "strands": comps })
}

fn load_front(text: &str) -> Result<(FrontDiagram, Option<Overlay>), CliError> {
    let v: Value = serde_json::from_str(text)?;
    match format_of(&v).as_str() {
        "SRG" => {
            let d: SurgeryDiagram = serde_json::from_value(v)?;
            let svg_labels = d
                .components
                .iter()
                .map(|c| (c.knot.points[0].clone(), format!("{} ({:+})", c.name, c.coefficient)))
                .collect();
            Ok((d.front(), Some(Overlay { labels: svg_labels, ..Overlay::default() })))
        }
        "LGF" => {
            let g = parse_graph(text)?;
            let overlay = Overlay {
                vertices: g.vertices.iter().map(|v| v.position.clone()).collect(),
                shading: render_ribbon_front(&g, None).strands,
                labels: vec![],
            };
            Ok((g.diagram, Some(overlay)))
        }
        "FRONT" => Ok((serde_json::from_value(v)?, None)),
        other => Err(CliError::Usage(format!("cannot read a front from a {other} document"))),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "{}", json!({ "error": e.to_string(), "exit": e.exit_code() }));
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { paths } => {
            let mut graph = None;
            let mut docs = vec![];
            let mut code = EXIT_OK;
            for p in &paths {
                let (format, v) = validate_one(p, &mut graph)?;
                if severity(v.code) > severity(code) {
                    code = v.code;
                }
                docs.push(json!({
                    "path": p.display().to_string(),
                    "format": format,
                    "status": if v.code == EXIT_OK { "ok" } else { "error" },
                    "entries": v.entries,
                }));
            }
            emit(out, &serde_json::to_string_pretty(&json!({ "documents": docs, "exit": code }))?)?;
            Ok(code)
        }
        Command::Realize { graph, curve, batch, opts, svg, out: dir } => {
            if let Some(batch) = batch {
                let mut entries: Vec<PathBuf> = std::fs::read_dir(&batch)
                    .map_err(|source| CliError::Io { path: batch.display().to_string(), source })?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.to_string_lossy().ends_with(".lgf.json"))
                    .collect();
                entries.sort();
                let mut code = EXIT_OK;
                for g in entries {
                    let c = PathBuf::from(g.to_string_lossy().replace(".lgf.json", ".crv.json"));
                    if !c.exists() {
                        continue;
                    }
                    match realize_pair(&g, &c, &opts, svg, &dir) {
                        Ok((name, r)) => emit(out, &format!("{name}: clean={} tb={} rot={}", r.report.is_clean(), r.report.tb, r.report.rot))?,
                        Err(e) => {
                            if severity(e.exit_code()) > severity(code) {
                                code = e.exit_code();
                            }
                            emit(out, &format!("{}: error: {e}", stem(&c)))?;
                        }
                    }
                }
                return Ok(code);
            }
            let (Some(g), Some(c)) = (graph, curve) else {
                return Err(CliError::Usage("realize needs GRAPH and CURVE, or --batch DIR".into()));
            };
            let (_, r) = realize_pair(&g, &c, &opts, svg, &dir)?;
            emit(out, &summary(&r))?;
            Ok(if r.report.is_clean() { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Compile { spec, opts, svg, out: dir } => {
            let s = parse_open_book(&read(&spec)?)?;
            let d = compile(&s, &params(&opts)?)?;
            let name = stem(&spec);
            std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
            write(&dir.join(format!("{name}.srg.json")), &d.to_document())?;
            if svg {
                write(&dir.join(format!("{name}.svg")), &surgery_svg(&d))?;
            }
            for c in &d.components {
                emit(
                    out,
                    &format!(
                        "{:<6} {:?} coefficient {:+} level {} tb {} rot {}",
                        c.name,
                        c.group,
                        c.coefficient,
                        rational::display(&c.level),
                        c.tb,
                        c.rot
                    ),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Invariants { path } => {
            let (d, _) = load_front(&read(&path)?)?;
            emit(out, &serde_json::to_string_pretty(&invariants(&d))?)?;
            Ok(EXIT_OK)
        }
        Command::Render { path, out: target, no_shading } => {
            let (d, overlay) = load_front(&read(&path)?)?;
            let style = RenderStyle { shade_ribbon: !no_shading, ..RenderStyle::default() };
            let svg = render_svg(&d, &style, &overlay.unwrap_or_default());
            match target {
                Some(t) => write(&t, &svg)?,
                None => emit(out, svg.trim_end())?,
            }
            Ok(EXIT_OK)
        }
    }
}
