use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use faa_core::io::{feature_map_to_csv, grid_from_csv, grid_to_csv, read_pgm, write_pgm, PgmKind};
use faa_core::{make_rectangle, FeatureMap, Grid, RectSpec};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn faa(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_faa"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn bar_pgm(dir: &Path, name: &str, phi_deg: f64) -> PathBuf {
    let g = make_rectangle(&RectSpec::new(64, 20.0, 6.0, phi_deg.to_radians()))
        .unwrap()
        .scale(255.0);
    let path = dir.join(name);
    write_pgm(&g, &path, false, PgmKind::Binary, 255).unwrap();
    path
}

fn dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

#[test]
fn estimate_reports_the_perpendicular_of_a_horizontal_bar() {
    let dir = tempfile::tempdir().unwrap();
    let input = bar_pgm(dir.path(), "bar.pgm", 0.0);
    let run = faa(&["estimate", "--input", s(&input)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert!(dist(doc["theta_hat_deg"].as_f64().unwrap(), 90.0) <= 1.0);
    assert_eq!(doc["degenerate"], false);
    assert_eq!(doc["histogram"].as_array().unwrap().len(), 180);
    assert!(doc["total_energy"].as_f64().unwrap() > 0.0);
}

#[test]
fn estimate_on_constant_input_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.pgm");
    write_pgm(
        &Grid::filled(16, 16, 80.0),
        &input,
        false,
        PgmKind::Ascii,
        255,
    )
    .unwrap();
    let doc = faa(&[
        "estimate",
        "--input",
        s(&input),
        "--bins",
        "90",
        "--window",
        "hann",
    ])
    .json();
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["theta_hat_deg"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["histogram"].as_array().unwrap().len(), 90);
}

#[test]
fn error_classes_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.csv");
    fs::write(&wide, "1,2,3\n4,5,6\n").unwrap();
    let run = faa(&["estimate", "--input", s(&wide)]);
    assert_eq!(run.code, 3);
    assert!(run.stdout.is_empty() && !run.stderr.is_empty());

    assert_eq!(
        faa(&["estimate", "--input", s(&dir.path().join("missing.csv"))]).code,
        2
    );
    let broken = dir.path().join("broken.pgm");
    fs::write(&broken, "P2 2 2 255\n0 255 255\n").unwrap();
    assert_eq!(faa(&["estimate", "--input", s(&broken)]).code, 2);
    let odd = dir.path().join("grid.txt");
    fs::write(&odd, "1,2\n3,4\n").unwrap();
    assert_eq!(faa(&["estimate", "--input", s(&odd)]).code, 4);
    assert_eq!(
        faa(&[
            "estimate",
            "--input",
            s(&odd),
            "--format",
            "csv",
            "--bins",
            "1"
        ])
        .code,
        4
    );
    assert_eq!(faa(&["estimate", "--nonsense"]).code, 4);
    assert_eq!(faa(&["--help"]).code, 0);
}

#[test]
fn aligning_a_thirty_degree_bar_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = bar_pgm(dir.path(), "bar30.pgm", 30.0);
    let out = dir.path().join("aligned.pgm");
    let run = faa(&[
        "align",
        "--input",
        s(&input),
        "--theta0",
        "0",
        "--out",
        s(&out),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = run.json();
    assert!(dist(doc["metrics"]["delta_theta_deg"].as_f64().unwrap(), -120.0) <= 2.0);
    let img = read_pgm::<f64>(&out).unwrap();
    assert_eq!((img.kind, img.maxval), (PgmKind::Binary, 255));
    let again = faa(&["estimate", "--input", s(&out)]).json();
    assert!(dist(again["theta_hat_deg"].as_f64().unwrap(), 0.0) <= 2.0);
}

#[test]
fn aligning_to_the_current_direction_changes_little() {
    let dir = tempfile::tempdir().unwrap();
    let g = make_rectangle(&RectSpec::new(32, 10.0, 3.0, 0.6)).unwrap();
    let input = dir.path().join("bar.csv");
    grid_to_csv(&g, &input).unwrap();
    let theta = faa(&["estimate", "--input", s(&input)]).json()["theta_hat_deg"]
        .as_f64()
        .unwrap();
    let out = dir.path().join("same.csv");
    let doc = faa(&[
        "align",
        "--input",
        s(&input),
        "--theta0",
        &theta.to_string(),
        "--out",
        s(&out),
    ])
    .json();
    assert!(doc["metrics"]["delta_theta_deg"].as_f64().unwrap().abs() <= 1.0);
    let back: Grid<f64> = grid_from_csv(&out).unwrap();
    assert!(back.max_abs_diff(&g) < 0.05);
}

#[test]
fn aligning_a_constant_grid_copies_it() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.pgm");
    fs::write(
        &input,
        "P2\n# flat\n4 4\n255\n7 7 7 7\n7 7 7 7\n7 7 7 7\n7 7 7 7\n",
    )
    .unwrap();
    let out = dir.path().join("out.pgm");
    let doc = faa(&[
        "align",
        "--input",
        s(&input),
        "--theta0",
        "-35",
        "--out",
        s(&out),
    ])
    .json();
    assert_eq!(doc["metrics"]["delta_theta_deg"].as_f64().unwrap(), 0.0);
    assert_eq!(fs::read(&input).unwrap(), fs::read(&out).unwrap());
}

#[test]
fn spectrum_of_an_impulse_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dot.csv");
    grid_to_csv(
        &Grid::from_fn(8, 8, |r, c| if (r, c) == (3, 5) { 1.0 } else { 0.0 }),
        &input,
    )
    .unwrap();
    let run = faa(&["spectrum", "--input", s(&input)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let power = read_pgm::<f64>(dir.path().join("dot_power.pgm"))
        .unwrap()
        .grid;
    let first = power.data()[0];
    assert!(power.data().iter().all(|&v| v == first));
    assert!(dir.path().join("dot_polar.csv").exists());
    assert_eq!(run.json()["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn polar_table_columns_peak_perpendicular_to_the_bar() {
    let dir = tempfile::tempdir().unwrap();
    let input = bar_pgm(dir.path(), "bar.pgm", 40.0);
    let polar = dir.path().join("polar.csv");
    let power = dir.path().join("power.pgm");
    let run = faa(&[
        "spectrum",
        "--input",
        s(&input),
        "--out-polar",
        s(&polar),
        "--out-power",
        s(&power),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let table: Grid<f64> = grid_from_csv(&polar).unwrap();
    assert_eq!(table.width(), 360);
    let sums: Vec<f64> = (0..360)
        .map(|j| (0..table.height()).map(|i| table.get(i, j)).sum())
        .collect();
    let best = (0..360)
        .max_by(|&a, &b| sums[a].total_cmp(&sums[b]))
        .unwrap();
    assert!(dist(best as f64, 130.0) <= 2.0, "{best}");
    assert!(power.exists());
}

#[test]
fn fusing_a_zero_high_map_returns_low() {
    let dir = tempfile::tempdir().unwrap();
    let low_map = FeatureMap::from_fn(2, 16, 16, |c, r, x| {
        ((c * 31 + r * 7 + x * 3) % 11) as f64 * 0.1 - 0.37
    });
    let low = dir.path().join("low.csv");
    let high = dir.path().join("high.csv");
    feature_map_to_csv(&low_map, &low).unwrap();
    feature_map_to_csv(&FeatureMap::<f64>::zeros(2, 8, 8), &high).unwrap();
    let config = dir.path().join("fuse.txt");
    fs::write(&config, "# two channels, 4x4 tiles\nchannels=2\nkernel=4\n").unwrap();
    let out = dir.path().join("fused.csv");
    let run = faa(&[
        "fuse",
        "--low",
        s(&low),
        "--high",
        s(&high),
        "--config",
        s(&config),
        "--out",
        s(&out),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(fs::read(&low).unwrap(), fs::read(&out).unwrap());
    assert_eq!(run.json()["metrics"]["patches"], 16);
}

#[test]
fn fuse_rejects_unknown_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("fuse.txt");
    fs::write(&config, "channels=1\nkrnel=8\n").unwrap();
    let low = dir.path().join("low.csv");
    let high = dir.path().join("high.csv");
    grid_to_csv(&Grid::<f64>::zeros(16, 16), &low).unwrap();
    grid_to_csv(&Grid::<f64>::zeros(8, 8), &high).unwrap();
    let out = dir.path().join("out.csv");
    let run = faa(&[
        "fuse",
        "--low",
        s(&low),
        "--high",
        s(&high),
        "--config",
        s(&config),
        "--out",
        s(&out),
    ]);
    assert_eq!(run.code, 4);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);
    let bad_shape = faa(&[
        "fuse",
        "--low",
        s(&low),
        "--high",
        s(&low),
        "--out",
        s(&out),
    ]);
    assert_eq!(bad_shape.code, 3);
}

#[test]
fn bench_reports_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("sweep.json");
    let run = faa(&[
        "bench",
        "--suite",
        "angles",
        "--angles",
        "0,45,90",
        "--no-oracle",
        "--csv",
        s(&csv),
        "--json",
        s(&json),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 4);
    assert!(doc.get("runtime_ms").is_none());
    let timed = faa(&[
        "bench",
        "--suite",
        "angles",
        "--angles",
        "10",
        "--no-oracle",
        "--timing",
    ])
    .json();
    assert!(timed["runtime_ms"].is_number());

    let eq = faa(&["bench", "--suite", "equivariance", "--angles", "0,90"]).json();
    assert_eq!(eq["rows"][1]["displacement_bins"].as_f64().unwrap(), 0.0);
}
