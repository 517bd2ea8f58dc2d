use std::path::Path;
use std::process::{Command, Output};

use curvlab::workbench::io::{operator_from_json, write_operator};
use curvlab::CurvatureOperator;

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_identity() {
    let out = curvlab(&["gen", "--n", "3", "--kind", "identity"]);
    assert_eq!(out.status.code(), Some(0));
    let r = operator_from_json(&stdout(&out)).unwrap();
    assert_eq!(r, CurvatureOperator::identity(3));
}

#[test]
fn gen_hypersurface_reports_both_pinchings() {
    let out = curvlab(&["gen", "--n", "3", "--kind", "hypersurface:1,1,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let note = String::from_utf8(out.stderr).unwrap();
    assert!(note.contains("hypersurface_delta = 0.6"), "{note}");
    assert!(note.contains("operator_delta_max = 0.75"), "{note}");
}

#[test]
fn flow_on_the_scaled_identity_ray() {
    let out = curvlab(&["flow", "--n", "3", "--kind", "scaled-identity:1", "--horizon", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header = rows.headers().unwrap().clone();
    let (ti, si) = (
        header.iter().position(|h| h == "t").unwrap(),
        header.iter().position(|h| h == "scal").unwrap(),
    );
    let mut count = 0;
    for row in rows.records() {
        let row = row.unwrap();
        let t: f64 = row[ti].parse().unwrap();
        let scal: f64 = row[si].parse().unwrap();
        let exact = 6.0 / (1.0 - 4.0 * t);
        assert!((scal - exact).abs() <= 1e-6 * exact, "t = {t}");
        count += 1;
    }
    assert!(count > 2);
}

#[test]
fn invariance_two_nonneg_passes() {
    let out = curvlab(&["invariance", "2nn", "--n", "3", "--samples", "10000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["aggregate"]["min_margin"].as_f64().unwrap() >= -1e-9);
    assert_eq!(report["config"]["samples"], 10000);
    assert_eq!(report["seeds"][0], 7);
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let runs: [&[&str]; 4] = [
        &["invariance", "labcb:0.25", "--n", "4", "--samples", "300", "--seed", "3", "--runs", "2"],
        &["gen", "--n", "5", "--kind", "random:pinch:0.2", "--seed", "11"],
        &["flow", "--n", "4", "--kind", "random:2nn", "--seed", "5", "--horizon", "0.1", "--cones", "2nn,psd", "--normalize"],
        &["identity-check", "--n", "3", "--max-n", "5", "--samples", "20", "--seed", "2"],
    ];
    for args in runs {
        let a = curvlab(args);
        let b = curvlab(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn file_based_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let cyl = CurvatureOperator::from_diagonal(3, &[1.0, 0.0, 0.0]).unwrap();
    write_operator(&path("cyl.json"), &cyl).unwrap();
    write_operator(&path("id.json"), &CurvatureOperator::identity(3)).unwrap();
    let p = |name: &str| path(name).to_str().unwrap().to_string();

    let out = curvlab(&["sharp", &p("cyl.json"), &p("id.json")]);
    assert_eq!(out.status.code(), Some(0));
    let prod = operator_from_json(&stdout(&out)).unwrap();
    assert_eq!(prod, CurvatureOperator::from_diagonal(3, &[0.0, 0.5, 0.5]).unwrap());

    let out = curvlab(&["decompose", "--input", &p("cyl.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["scal"], 2.0);
    assert_eq!(v["delta_max"], 0.0);

    // membership outside the cone and refused certification are violations
    assert_eq!(curvlab(&["cone", "check", "pinch:0.1", "--input", &p("cyl.json")]).status.code(), Some(2));
    assert_eq!(curvlab(&["cone", "check", "2nn", "--input", &p("cyl.json")]).status.code(), Some(0));
    assert_eq!(curvlab(&["cone", "certify", "--input", &p("cyl.json")]).status.code(), Some(2));
    let out = curvlab(&["cone", "certify", "--input", &p("id.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["b"], 0.5);

    // --out writes the payload to a file
    let target = path("gen.json");
    let out = curvlab(&["gen", "--n", "4", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(read(&target), CurvatureOperator::identity(4));
}

fn read(p: &Path) -> CurvatureOperator {
    operator_from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 4, "basis": "lex-upper", "coeffs": [[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]}"#)
        .unwrap();
    let out = curvlab(&["decompose", "--n", "4", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("expected a 6x6 matrix"));

    for args in [
        &["frobnicate"][..],
        &["gen", "--bogus"],
        &["gen", "--n", "2"],
        &["gen", "--kind", "product-sphere:5"],
        &["cone", "check", "nonsense", "--kind", "identity"],
        &["decompose"],
        &["invariance", "pinch:0.3", "--samples", "5"],
    ] {
        let out = curvlab(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let usage = String::from_utf8(curvlab(&["frobnicate"]).stderr).unwrap();
    assert!(usage.contains("Usage"), "{usage}");
    assert_eq!(curvlab(&["--help"]).status.code(), Some(0));
}
