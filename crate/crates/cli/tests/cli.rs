use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stochpl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochpl")).current_dir(dir).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn groemer_config_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "groemer", "f": {"family": "gaussian", "center": [2.0], "a": 1.0}, "N": 5, "seed": 4}"#;
    write(dir.path(), "cfg.json", cfg);
    let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", "run"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("run/survival.csv")).unwrap();
    assert_eq!(csv.lines().count(), 201);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 4);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "pl", "f": {"family": "gaussian", "center": [2.0], "a": 1.0},
        "g": {"family": "indicator_box", "lo": [0.0], "hi": [1.0]}, "N": 5, "M": 5, "lambda": 0.3, "m": 300}"#;
    write(dir.path(), "cfg.json", cfg);
    for (run, threads) in [("a", "1"), ("b", "3")] {
        let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", run, "--seed", "11", "--threads", threads]);
        assert!(matches!(out.status.code(), Some(0) | Some(2)));
    }
    let a = fs::read(dir.path().join("a/report.json")).unwrap();
    let b = fs::read(dir.path().join("b/report.json")).unwrap();
    assert_eq!(a, b);
    assert!(!String::from_utf8(a).unwrap().contains("timestamp"));
}

#[test]
fn radial_pl_config_is_zero_margin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "pl", "f": {"family": "gaussian", "center": [0.0], "a": 1.0},
        "g": {"family": "gaussian", "center": [0.0], "a": 1.0}, "N": 5, "M": 5, "lambda": 0.5, "seed": 2}"#;
    write(dir.path(), "cfg.json", cfg);
    let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", "run"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/report.json")).unwrap()).unwrap();
    let eps = r["epsilon"].as_f64().unwrap();
    let (s, t) = (r["survival"].as_array().unwrap(), r["survival_star"].as_array().unwrap());
    assert!(s.iter().zip(t).all(|(a, b)| (a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= 2.0 * eps));
}

#[test]
fn identity_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "identity-suite", "functions": [{"family": "indicator_box", "lo": [0.0], "hi": [2.0]},
        {"family": "gaussian", "center": [1.0], "a": 2.0}], "s": [1, 2], "mc_samples": 200000}"#;
    write(dir.path(), "cfg.json", cfg);
    let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", "run"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn failing_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "steiner-convexity", "functional": {"kind": "negated_groemer"}, "n": 2, "N": 4, "trials": 100}"#;
    write(dir.path(), "cfg.json", cfg);
    let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", "run"]);
    assert_eq!(out.status.code(), Some(2));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/manifest.json")).unwrap()).unwrap();
    assert_eq!(r["verdict"], "fail");
}

#[test]
fn malformed_config_exits_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{\n  \"kind\": \"groemer\",\n  \"N\": 5\n");
    let out = stochpl(dir.path(), &["experiment", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    write(dir.path(), "small.json", r#"{"kind": "groemer", "f": {"family": "gaussian", "center": [0.0], "a": 1.0}, "N": 2}"#);
    assert_eq!(stochpl(dir.path(), &["experiment", "--config", "small.json"]).status.code(), Some(1));
}

#[test]
fn unknown_subcommand_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = stochpl(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn steiner_convexity_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind": "steiner-convexity", "functional": {"kind": "groemer"}, "n": 2, "N": 4, "trials": 200}"#;
    write(dir.path(), "cfg.json", cfg);
    let out = stochpl(dir.path(), &["experiment", "--config", "cfg.json", "--out", "run"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("run/survival.csv").exists());
}

#[test]
fn supconv_of_two_boxes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", r#"{"family": "indicator_box", "lo": [0.0], "hi": [1.0]}"#);
    write(dir.path(), "b.json", r#"{"family": "indicator_box", "lo": [0.0], "hi": [2.0]}"#);
    let out = stochpl(dir.path(), &["supconv", "--f", "a.json", "--g", "b.json", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let h: stochpl::logconcave::LogConcaveFunction = serde_json::from_slice(&out.stdout).unwrap();
    let b = h.effective_box();
    assert_eq!((b.lo[0], b.hi[0]), (0.0, 1.5));
    assert_eq!(h.evaluate(&[0.75]).unwrap(), 1.0);
}

#[test]
fn rearrange_centres_a_shifted_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.json", r#"{"family": "gaussian", "center": [2.0], "a": 1.0}"#);
    let out = stochpl(dir.path(), &["rearrange", "--function", "f.json", "--out", "p.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let profile = stochpl::logconcave::RadialProfile::read_csv(1, fs::File::open(dir.path().join("p.csv")).unwrap()).unwrap();
    assert!((profile.value(0.0) - 1.0).abs() < 1e-9);
    assert!((profile.value(1.0) - (-1.0f64).exp()).abs() < 1e-6);
}

#[test]
fn sample_then_envelope_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "f.json", r#"{"family": "gaussian", "center": [0.0, 0.0], "a": 1.0}"#);
    let out = stochpl(dir.path(), &["sample", "--function", "f.json", "--count", "40", "--seed", "5", "--out", "s.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let out = stochpl(dir.path(), &["envelope", "--samples", "s.csv", "--out", "e.json"]);
    assert_eq!(out.status.code(), Some(0));
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().strip_prefix("integral ").unwrap().parse().unwrap();
    let e: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("e.json")).unwrap()).unwrap();
    assert_eq!(e["integral"].as_f64().unwrap(), printed);
    assert!(printed > 0.0 && printed < std::f64::consts::PI);
    assert!(!e["cells"].as_array().unwrap().is_empty());
}
