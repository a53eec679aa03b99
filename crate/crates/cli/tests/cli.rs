use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qdof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdof")).args(args).output().expect("spawn qdof")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lists_every_experiment() {
    let out = qdof(&["list-experiments"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["Fig1Spin", "Fig3Osc", "ConjectureMatrix", "Sweep"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn validate_accepts_shipped_configs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = qdof(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn unknown_keys_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment = \"Fig1Spin\"\nsedd = 3\n");
    assert_eq!(qdof(&["validate", &cfg]).status.code(), Some(2));
    let cfg = write_config(tmp.path(), "experiment = \"Fig1Spin\"\n[params]\nomgea = 2.0\n");
    assert_eq!(qdof(&["validate", &cfg]).status.code(), Some(2));
    assert_eq!(qdof(&["run", &cfg]).status.code(), Some(2));
}

#[test]
fn out_of_range_parameters_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment = \"Fig1Spin\"\n[params]\nsamples = 1\n");
    assert_eq!(qdof(&["validate", &cfg]).status.code(), Some(2));
}

#[test]
fn missing_config_is_a_config_error() {
    assert_eq!(qdof(&["validate", "/nonexistent/config.toml"]).status.code(), Some(2));
}

#[test]
fn fig1_run_passes_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment = \"Fig1Spin\"\nseed = 7\n");
    let mut traces = Vec::new();
    for run in ["a", "b"] {
        let dir = tmp.path().join(run);
        let out = qdof(&["run", &cfg, "--output-dir", dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("verdict: PASS"));
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["experiment"], "Fig1Spin");
        assert_eq!(manifest["seed"], 7);
        assert_eq!(manifest["verdict"]["pass"], true);
        traces.push(fs::read(dir.join("trace_broken.csv")).unwrap());
    }
    assert_eq!(traces[0], traces[1]);
}

#[test]
fn sweep_has_no_verdict() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "experiment = \"Sweep\"\n[params]\npoints = 3\nt_end = 2.0\nsamples = 21\n",
    );
    let dir = tmp.path().join("sweep");
    let out = qdof(&["run", &cfg, "--output-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(rows.lines().count(), 4);
}

#[test]
fn oracle_suites() {
    let out = qdof(&["oracle", "algebra"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
    assert_eq!(qdof(&["oracle", "astrology"]).status.code(), Some(2));
}
