use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pathlight_cli::output::Manifest;

fn pathlight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathlight")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn example(name: &str) -> String {
    format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn column(csv: &str, i: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

const SMALL_FOCAL: &str = "scenario = parabolic-focal-scan\nstart = 0\nstop = 0.01\nstep = 0.0025\nmin_nodes_per_axis = 101\n";

#[test]
fn run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.conf", SMALL_FOCAL);
    let out = dir.path().join("scan.csv");
    let r = pathlight(&["run", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next(), Some("x_d_mm,P"));
    assert_eq!(csv.lines().count(), 6);
    let summary = String::from_utf8_lossy(&r.stderr);
    assert!(summary.contains("5 rows"), "{summary}");

    let manifest = Manifest::from_json(&fs::read_to_string(dir.path().join("scan.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.scenario, "parabolic-focal-scan");
    assert_eq!(manifest.rows.len(), 5);
    let p = column(&csv, 1);
    for (row, p) in manifest.rows.iter().zip(p) {
        assert!((row.probability - p).abs() <= 1e-15 * p.max(1e-300));
    }
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.conf", SMALL_FOCAL);
    let r = pathlight(&["run", "--config", cfg.to_str().unwrap(), "--format", "json", "--output", "-"]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    let m = Manifest::from_json(&text).unwrap();
    assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
    assert_eq!(m.rows[0].probability.to_bits(), Manifest::from_json(&text).unwrap().rows[0].probability.to_bits());
}

#[test]
fn default_focal_scan_has_201_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("focal.csv");
    let r = pathlight(&["run", "--config", &example("focal-plane.conf"), "--output", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next(), Some("x_d_mm,P"));
    let p = column(&csv, 1);
    assert_eq!(p.len(), 201);
    assert!((p[0] - 1.0).abs() < 1e-9);
}

#[test]
fn default_side_scan_shows_ten_micron_fringes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("side.csv");
    let r = pathlight(&["run", "--config", &example("side-position.conf"), "--output", out.to_str().unwrap()]);
    assert!(r.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let (x, p) = (column(&csv, 0), column(&csv, 1));
    let minima: Vec<f64> = (1..p.len() - 1).filter(|&i| p[i] < p[i - 1] && p[i] <= p[i + 1]).map(|i| x[i]).collect();
    assert_eq!(minima.len(), 9, "{minima:?}");
    for m in minima {
        let nearest = (m / 0.01).round() * 0.01;
        assert!((m - nearest).abs() <= 5e-4 + 1e-12, "{m}");
    }
}

#[test]
fn six_axis_sphere_rows_pair_up() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sphere.conf",
        "scenario = sphere-isotropy\nsphere_radius_R = 0.006\ndetector_radius_r = 0.002\ndirections = 6\n",
    );
    let r = pathlight(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success());
    let csv = String::from_utf8(r.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("direction_index,P"));
    let p: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(p.len(), 6);
    for pair in p.chunks(2) {
        assert_eq!(pair[0], pair[1]);
    }
}

#[test]
fn sphere_margin_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sphere.conf",
        "scenario = sphere-isotropy\nsphere_radius_R = 0.004\ndetector_radius_r = 0.002\ndirections = 6\nformat = json\n",
    );
    let r = pathlight(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("warning: ordering margin"));
    let m = Manifest::from_json(&String::from_utf8(r.stdout).unwrap()).unwrap();
    assert_eq!(m.warnings.len(), 1);
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.conf", "scenario = side-position-scan\nstart = -0.01\nstop = 0.01\nstep = 0.001\n");
    let run = |w: &str| {
        let r = pathlight(&["run", "--config", cfg.to_str().unwrap(), "--workers", w]);
        assert!(r.status.success());
        r.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("7"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.conf");
    assert_eq!(pathlight(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(3));

    let bad = write_config(dir.path(), "bad.conf", "scenario = parabolic-focal-scan\nstep = 0\n");
    let r = pathlight(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("step"));

    let unknown = write_config(dir.path(), "unknown.conf", "scenario = telescope\n");
    assert_eq!(pathlight(&["run", "--config", unknown.to_str().unwrap()]).status.code(), Some(2));

    let ok = write_config(dir.path(), "ok.conf", SMALL_FOCAL);
    let unwritable = dir.path().join("no-such-dir").join("out.csv");
    let r = pathlight(&["run", "--config", ok.to_str().unwrap(), "--output", unwritable.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));

    let r = pathlight(&["verify", "--samples-per-cycle", "2"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("samples_per_cycle"));
    assert_eq!(pathlight(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_single_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let r = pathlight(&["verify", "--suite", "side-thickness-scan", "--report", report.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let parsed: pathlight_cli::VerificationReport = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(parsed.passed);
    assert_eq!(parsed.suite, "side-thickness-scan");
    assert!(parsed.rows.iter().all(|r| r.passed));
}
