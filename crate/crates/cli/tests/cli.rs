use std::path::{Path, PathBuf};

use clap::Parser;
use legreal_cli::commands::{EXIT_ERROR, EXIT_GENERICITY, EXIT_OK, EXIT_TRIVIAL};
use legreal_cli::{run, Cli};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn exec(args: &[&str]) -> (i32, String) {
    let cli = Cli::try_parse_from(std::iter::once("legreal").chain(args.iter().copied())).expect("arguments parse");
    let mut out = Vec::new();
    let code = run(cli, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_worked_example() {
    let (code, out) = exec(&["validate", &fixture("worked_example.lgf.json"), &fixture("worked_example.crv.json")]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["documents"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_flags_tangential_crossing() {
    let (code, out) = exec(&["validate", &fixture("tangential.front.json")]);
    assert_eq!(code, EXIT_GENERICITY);
    assert!(out.contains("tangential crossing"), "{out}");
}

#[test]
fn validate_reports_trivial_curve_with_witness() {
    let (code, out) = exec(&["validate", &fixture("wedge_boundary.lgf.json"), &fixture("wedge_boundary.crv.json")]);
    assert_eq!(code, EXIT_TRIVIAL);
    assert!(out.contains("homologically_trivial"));
    assert!(out.contains("cocore_counts"));
}

#[test]
fn curve_without_graph_is_a_usage_error() {
    let (code, _) = exec(&["validate", &fixture("theta.crv.json")]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn realize_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = exec(&[
        "realize",
        &fixture("theta.lgf.json"),
        &fixture("theta.crv.json"),
        "--svg",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("clean: true"));
    for f in ["theta.front.json", "theta.report.json", "theta.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let front = dir.path().join("theta.front.json");
    let (code, out) = exec(&["validate", s(&front)]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out) = exec(&["invariants", s(&front)]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["components"], 1);
    assert_eq!(v["strands"][0]["closure_zero"], true);
}

#[test]
fn realize_options() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = exec(&[
        "realize",
        &fixture("worked_example.lgf.json"),
        &fixture("worked_example.crv.json"),
        "--epsilon",
        "1/4096",
        "--reverse",
        "--start-pass",
        "2",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out) = exec(&["realize", &fixture("theta.lgf.json"), &fixture("theta.crv.json"), "--mu", "abc"]);
    assert_eq!(code, EXIT_ERROR, "{out}");
}

#[test]
fn realize_rejects_trivial_curve() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = exec(&[
        "realize",
        &fixture("wedge_boundary.lgf.json"),
        &fixture("wedge_boundary.crv.json"),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code, EXIT_TRIVIAL, "{out}");
}

#[test]
fn batch_realizes_every_pair() {
    let dir = tempfile::tempdir().unwrap();
    let batch = fixture("");
    let (code, out) = exec(&["realize", "--batch", &batch, "--out", s(dir.path())]);
    assert_eq!(code, EXIT_TRIVIAL, "{out}");
    for name in ["diamond", "theta", "worked_example"] {
        assert!(out.contains(&format!("{name}: clean=true")), "{out}");
        assert!(dir.path().join(format!("{name}.front.json")).exists());
    }
    assert!(out.contains("wedge_boundary: error"));
}

#[test]
fn compile_and_render_surgery_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = exec(&["compile", &fixture("torus_two_boundaries.obk.json"), "--svg", "--out", s(dir.path())]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().count(), 5);
    let srg = dir.path().join("torus_two_boundaries.srg.json");
    assert!(dir.path().join("torus_two_boundaries.svg").exists());
    let (code, out) = exec(&["invariants", s(&srg)]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["components"], 5);
    let (code, out) = exec(&["render", s(&srg)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("<svg"));
}

#[test]
fn render_graph_with_ribbon() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("g.svg");
    let (code, _) = exec(&["render", &fixture("worked_example.lgf.json"), "--out", s(&target)]);
    assert_eq!(code, EXIT_OK);
    let svg = std::fs::read_to_string(&target).unwrap();
    assert!(svg.contains("<polygon") || svg.contains("fill"));
}

#[test]
fn missing_file_is_an_error() {
    let (code, out) = exec(&["invariants", "/nonexistent/x.json"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("error"));
}
