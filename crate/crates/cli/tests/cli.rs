use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bohmex_cli::{run_scenario, Scenario, ScenarioConfig};

fn bohmex(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohmex"))
        .args(args)
        .env("BOHMEX_OUTPUT_ROOT", root)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL_HARMONIC: &str = r#"
scenario = "fig13_14_harmonic_exchange"
seed = 3
output_dir = "small"

[grid]
x_min = -200.0
x_max = 200.0
n_points = 401
n_points_2d = 401

[[packets]]
x0 = -30.0
energy = 0.04
direction = 1.0
sigma = 15.0

[[packets]]
x0 = 30.0
energy = 0.04
direction = -1.0
sigma = 15.0

[ensemble]
trajectories = 100
dt = 1.0
duration = 40.0
stride = 5
coupling = 1e-6
"#;

#[test]
fn lists_every_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bohmex(&["list-scenarios"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for s in Scenario::ALL {
        assert!(text.contains(s.name()), "{s} missing");
    }
}

#[test]
fn validate_accepts_defaults_and_rejects_narrow_grids() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = write(tmp.path(), "ok.toml", "scenario = \"fig3_free_distinguishable\"\n");
    assert_eq!(bohmex(&["validate", &ok], tmp.path()).status.code(), Some(0));
    let narrow = write(
        tmp.path(),
        "narrow.toml",
        "scenario = \"fig3_free_distinguishable\"\n[grid]\nx_max = 150.0\n",
    );
    let out = bohmex(&["validate", &narrow], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("grid too narrow"));
    let out = bohmex(&["run", &narrow], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_one_with_a_line() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write(
        tmp.path(),
        "bad.toml",
        "scenario = \"property_suite\"\n[grid]\nspacing = 1.0\n",
    );
    let out = bohmex(&["run", &bad], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("spacing"), "{err}");
    assert_eq!(bohmex(&["run", "/nonexistent.toml"], tmp.path()).status.code(), Some(1));
}

#[test]
fn same_config_and_seed_give_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::resolve(SMALL_HARMONIC, Path::new("small.toml")).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_scenario(&cfg, &a).unwrap();
    run_scenario(&cfg, &b).unwrap();
    let mut names: Vec<_> = fs::read_dir(a.join("small"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "energies_conditional.csv"));
    assert!(names.iter().any(|n| n == "manifest.toml"));
    for n in &names {
        let x = fs::read(a.join("small").join(n)).unwrap();
        let y = fs::read(b.join("small").join(n)).unwrap();
        assert!(x == y, "{n:?} differs");
    }
    let manifest = fs::read_to_string(a.join("small/manifest.toml")).unwrap();
    let back = ScenarioConfig::resolve(&manifest, Path::new("manifest.toml")).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn every_csv_starts_with_a_header() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::resolve(SMALL_HARMONIC, Path::new("small.toml")).unwrap();
    run_scenario(&cfg, tmp.path()).unwrap();
    for e in fs::read_dir(tmp.path().join("small")).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "csv") {
            let text = fs::read_to_string(&p).unwrap();
            let head = text.lines().next().unwrap();
            assert!(head.chars().next().unwrap().is_ascii_alphabetic(), "{p:?}: {head}");
        }
    }
}

#[test]
fn iv_sweep_has_one_row_per_bias_and_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "iv.toml",
        "scenario = \"transport_iv\"\noutput_dir = \"iv\"\n[transport]\nduration = 600.0\ntrim = 100.0\nbatches = 5\n",
    );
    let out = bohmex(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let iv = fs::read_to_string(tmp.path().join("iv/iv.csv")).unwrap();
    let lines: Vec<&str> = iv.lines().collect();
    assert!(lines[0].starts_with("bias_V,interactions,"));
    assert_eq!(lines.len(), 1 + 16);
    assert!(tmp.path().join("iv/summary.txt").exists());
}

#[test]
fn property_suite_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "p.toml", "scenario = \"property_suite\"\n");
    let out = bohmex(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
