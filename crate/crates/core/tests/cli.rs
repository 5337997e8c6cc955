use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindlekit")).args(args).current_dir(dir).output().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const SCENE: &str = r#"{
  "lambda": 1,
  "shapes": {
    "pts": {"points": [[0, 0], [0.6, 0.1], [0.3, 0.5]]},
    "lens": {"spindle": [[-0.5, 0], [0.5, 0.2]]},
    "room": {"polygon": [[-0.8, -0.6], [0.8, -0.6], [0.8, 0.6], [0.1, 0.6], [0, 0], [-0.1, 0.6], [-0.8, 0.6]]},
    "pair": {"flower": {"disks": [[0, 0], [1, 0]], "expr": ["cup", 0, 1]}}
  },
  "treasures": [[-0.5, 0.4], [0.5, 0.4], [0, -0.4]],
  "grid": {"resolution": 32},
  "seed": 5
}"#;

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scene.json"), SCENE).unwrap();
    dir
}

#[test]
fn kernel_on_two_disk_flower() {
    let dir = setup();
    let out = run(&["kernel", "--scene", "scene.json", "--out", "k"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let j = read_json(&dir.path().join("k/kernel.json"));
    assert_eq!(j["shape"], "pair");
    assert!(j["within_eps_set"].as_bool().unwrap());
    assert!(j["gap_cells"].as_f64().unwrap() <= 1.5);
    let svg = std::fs::read_to_string(dir.path().join("k/kernel.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("spindle kernel, definition"));
}

#[test]
fn drawing_commands() {
    let dir = setup();
    for (cmd, shape, file) in [
        ("spindle", "lens", "spindle.json"),
        ("hull", "pts", "hull.json"),
        ("flower-kernel", "pair", "flower-kernel.json"),
        ("visibility", "room", "visibility.json"),
        ("gallery", "room", "gallery.json"),
    ] {
        let out = run(&[cmd, "--scene", "scene.json", "--out", cmd, "--shape", shape], dir.path());
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join(cmd).join(file).exists(), "{cmd}");
    }
    assert_eq!(read_json(&dir.path().join("spindle/spindle.json"))["kind"], "lens");
    assert_eq!(read_json(&dir.path().join("flower-kernel/flower-kernel.json"))["reduced"], true);
    let g = read_json(&dir.path().join("gallery/gallery.json"));
    assert!(g["linear"].get("guard").is_some());
}

#[test]
fn gallery_on_convex_polygon_finds_a_guard() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.json"),
        r#"{"shapes": {"sq": {"polygon": [[0, 0], [1, 0], [1, 1], [0, 1]]}}, "treasures": [[0.2, 0.2], [0.8, 0.7]]}"#,
    )
    .unwrap();
    let out = run(&["gallery", "--scene", "s.json", "--out", "g"], dir.path());
    assert!(out.status.success());
    let g = read_json(&dir.path().join("g/gallery.json"));
    assert!(g["linear"]["guard"]["x"].is_number() && g["spindle"]["guard"]["x"].is_number());
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = setup();
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--scene", "scene.json"], dir.path()).status.code(), Some(2));
    let out = run(&["kernel", "--scene", "scene.json", "--out", "o", "--resolution", "2048"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--resolution"));
    std::fs::write(dir.path().join("bad.json"), r#"{"shapes": {"d": {"disk": [[0, 0], -1]}}}"#).unwrap();
    let out = run(&["kernel", "--scene", "bad.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/shapes/d/disk/1"));
    let out = run(&["flower-kernel", "--scene", "scene.json", "--out", "o", "--shape", "room"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_certificates() {
    let dir = setup();
    let out = run(&["verify", "--scene", "scene.json", "--out", "v", "--shape", "pair", "--timings"], dir.path());
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{table}");
    assert!(table.contains("kernel-formula") && table.contains("family-helly"));
    let certs = read_json(&dir.path().join("v/certificates.json"));
    let certs = certs.as_array().unwrap();
    assert_eq!(certs.len(), 10);
    for c in certs {
        for key in ["theorem", "hypothesis_holds", "conclusion_holds", "witnesses", "timings"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert!(c["timings"].is_number());
    }
}

#[test]
fn corpus_scenes_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["corpus", "--out", "c"], dir.path());
    assert!(out.status.success());
    let files: Vec<_> = std::fs::read_dir(dir.path().join("c")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 22);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let scene = spindlekit::scene::parse_scene(&text).unwrap();
        assert_eq!(scene.to_json(), text, "{}", f.display());
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = setup();
    std::fs::write(dir.path().join("taken"), "").unwrap();
    let out = run(&["kernel", "--scene", "scene.json", "--out", "taken"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
