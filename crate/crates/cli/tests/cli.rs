use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn geolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geolab")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_writes_off() {
    let dir = tempfile::tempdir().unwrap();
    let out = geolab(&["gen", "--family", "ellipsoid", "--axes", "1,1,1", "--res", "320", "--seed", "7", "--out", "s.off"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("s.off")).unwrap();
    assert!(text.starts_with("OFF\n"));
    let desc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(desc["faces"], 320);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.obj", "b.obj"] {
        let out = geolab(&["gen", "--family", "random-hull", "--points", "80", "--seed", "3", "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(dir.path().join("a.obj")).unwrap(), std::fs::read(dir.path().join("b.obj")).unwrap());
}

#[test]
fn verify_cube_golden_instance() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(geolab(&["gen", "--family", "cube", "--out", "cube.off"], dir.path()).status.code(), Some(0));
    let out = geolab(
        &["verify", "--mesh", "cube.off", "--from", "f0:0.33,0.33", "--to", "f10:0.33,0.33", "--checks", "all", "--out", "run"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bundle = json(&dir.path().join("run/bundle.json"));
    assert_eq!(bundle["verdict"], "pass");
    assert!(bundle["path"]["certificate"]["certified"].as_bool().unwrap());
    assert!(!bundle["reports"].as_array().unwrap().is_empty());
    let manifest = json(&dir.path().join("run/manifest.json"));
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
    assert_eq!(manifest["outputs"][0]["path"].as_str().unwrap(), "run/bundle.json");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = geolab(&["verify", "--mesh", "x.off", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = geolab(&["geodesic", "--mesh", "missing.off", "--from", "f0:0.3,0.3", "--to", "f1:0.3,0.3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = geolab(&["verify", "--mesh", "x.off", "--from", "f0:0.3", "--to", "f1:0.3,0.3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
        "surfaces": [{"kind": "ellipsoid", "a": 1.0, "b": 0.7, "c": 0.5, "resolution": 600, "count": 2}],
        "pairs_per_surface": 3,
        "directions_per_path": 4
    }"#;
    std::fs::write(dir.path().join("small.json"), config).unwrap();
    let a = geolab(&["sweep", "--config", "small.json", "--seed", "42"], dir.path());
    let b = geolab(&["sweep", "--config", "small.json", "--seed", "42"], dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let agg: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(agg["instances"], 6);
    assert_eq!(agg["config"]["master_seed"], 42);
    let c = geolab(&["sweep", "--config", "small.json", "--seed", "43"], dir.path());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sweep_thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"surfaces": [{"kind": "tetrahedron", "resolution": 4}], "pairs_per_surface": 2, "directions_per_path": 2}"#;
    std::fs::write(dir.path().join("t.json"), config).unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_geolab"))
            .args(["sweep", "--config", "t.json"])
            .env("GEOLAB_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("lots").status.code(), Some(2));
}

#[test]
fn report_renders_developments_and_staircases() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = r#"{
        "developments": [{"name": "flat", "development": {
            "points": [[0.0, 0.0], [1.0, 0.0]], "s": [0.0, 1.0],
            "reference": {"kind": "direction", "direction": [0.0, 0.0, 1.0]}, "clamped": 0}}],
        "crossings": [{"u": [0.0, 0.0, 1.0], "merged": 0, "crossings": [
            {"t": 0.1, "alpha": 0.0, "sign": 1, "transversal": true},
            {"t": 0.2, "alpha": 0.0, "sign": 1, "transversal": true},
            {"t": 0.3, "alpha": 0.0, "sign": -1, "transversal": true},
            {"t": 0.4, "alpha": 0.0, "sign": -1, "transversal": true}]}]
    }"#;
    std::fs::write(dir.path().join("b.json"), bundle).unwrap();
    let out = geolab(&["report", "--bundle", "b.json", "--out", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dev = std::fs::read_to_string(dir.path().join("svg/development-0-flat.svg")).unwrap();
    assert_eq!(dev.matches("<line").count(), 1);
    assert!(!dev.contains("<polyline"));
    let stairs = std::fs::read_to_string(dir.path().join("svg/staircase-0.svg")).unwrap();
    assert!(stairs.contains("<polyline"));

    // rendering twice gives the same bytes
    let again = geolab(&["report", "--bundle", "b.json", "--out", "svg2"], dir.path());
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(dev, std::fs::read_to_string(dir.path().join("svg2/development-0-flat.svg")).unwrap());
}

#[test]
fn empty_bundle_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("e.json"), "{}").unwrap();
    let out = geolab(&["report", "--bundle", "e.json", "--out", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("svg").exists());
}

#[test]
fn analyze_cube_direction_development() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(geolab(&["gen", "--family", "cube", "--out", "cube.off"], dir.path()).status.code(), Some(0));
    // centres of the bottom square and the top square
    let out = geolab(
        &["analyze", "--mesh", "cube.off", "--from", "f0:0.5,0.0", "--to", "f10:0.5,0.0", "--direction", "0,1,0", "--out", "a"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bundle = json(&dir.path().join("a/bundle.json"));
    let length = bundle["path"]["length"].as_f64().unwrap();
    assert!((length - 2.0).abs() < 1e-6);
    // three straight pieces: the sample on the side diagonal is a flat vertex
    let pts: Vec<(f64, f64)> = bundle["developments"][0]["development"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    let bends = pts
        .windows(3)
        .filter(|w| {
            let (a, b) = ((w[1].0 - w[0].0, w[1].1 - w[0].1), (w[2].0 - w[1].0, w[2].1 - w[1].1));
            (a.0 * b.1 - a.1 * b.0).abs() > 1e-9
        })
        .count();
    assert_eq!(bends, 2);
    let out = geolab(&["report", "--bundle", "a/bundle.json", "--out", "svg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("svg/development-0-direction.svg")).unwrap();
    let poly = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(poly.split_whitespace().count(), pts.len());
}
