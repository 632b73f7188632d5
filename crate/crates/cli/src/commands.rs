use std::fs;
use std::path::{Path, PathBuf};

use faa_core::io::{
    feature_map_from_csv, feature_map_to_csv, grid_to_csv, grid_to_pgm, read_pgm, write_pgm,
    PgmKind,
};
use faa_core::spectral::fae_power;
use faa_core::synth::band_limited_image;
use faa_core::{
    bench_angle_sweep, bench_equivariance, faa_align, faafusion, fae, polar_resample, FaeConfig,
    FeatureMap, SweepOptions,
};
use serde_json::{json, Value};

use crate::config::{parse_settings, FuseSettings};
use crate::error::{CliError, CliResult};
use crate::files::{emit_json, sibling, write_text, Format, Loaded};
use crate::{BenchArgs, EstimatorArgs, Suite};

impl EstimatorArgs {
    fn config(&self) -> CliResult<FaeConfig> {
        let cfg = FaeConfig {
            n_theta: self.bins.saturating_mul(2),
            window: self.window.into(),
            ..FaeConfig::default()
        };
        if self.bins < 2 {
            return Err(CliError::Config(format!(
                "--bins must be at least 2, got {}",
                self.bins
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(path: &Path, kind: &str) -> Value {
    json!({ "path": path.display().to_string(), "kind": kind })
}

fn load(input: &Path, format: Option<Format>) -> CliResult<Loaded> {
    Loaded::read(input, Format::resolve(format, input)?)
}

pub fn estimate(
    input: &Path,
    format: Option<Format>,
    est: &EstimatorArgs,
    dest: &str,
) -> CliResult<()> {
    let cfg = est.config()?;
    let loaded = load(input, format)?;
    let e = fae(&loaded.grid, &cfg)?;
    emit_json(
        &json!({
            "command": "estimate",
            "input": loaded.describe(input),
            "outputs": [],
            "theta_hat_deg": e.theta_hat_deg(),
            "degenerate": e.degenerate,
            "histogram": e.histogram,
            "total_energy": e.total_energy,
            "metrics": {
                "bins": e.histogram.len(),
                "bin_width_deg": 180.0 / e.histogram.len() as f64,
            },
        }),
        dest,
    )
}

pub fn align(
    input: &Path,
    format: Option<Format>,
    theta0_deg: f64,
    out: &Path,
    est: &EstimatorArgs,
    dest: &str,
) -> CliResult<()> {
    if !theta0_deg.is_finite() {
        return Err(CliError::Config("--theta0 must be finite".into()));
    }
    let cfg = est.config()?;
    let loaded = load(input, format)?;
    let (aligned, e) = faa_align(&loaded.grid, theta0_deg.to_radians(), &cfg)?;
    let delta_deg = if e.degenerate {
        // nothing to rotate: hand the input back byte for byte
        fs::copy(input, out).map_err(|err| CliError::io(out, err))?;
        0.0
    } else {
        loaded.write_like(&aligned, out)?;
        theta0_deg - e.theta_hat_deg()
    };
    emit_json(
        &json!({
            "command": "align",
            "input": loaded.describe(input),
            "outputs": [output(out, loaded.format.name())],
            "degenerate": e.degenerate,
            "metrics": {
                "theta_hat_deg": e.theta_hat_deg(),
                "theta0_deg": theta0_deg,
                "delta_theta_deg": delta_deg,
            },
        }),
        dest,
    )
}

pub fn spectrum(
    input: &Path,
    format: Option<Format>,
    out_power: Option<PathBuf>,
    out_polar: Option<PathBuf>,
    est: &EstimatorArgs,
    dest: &str,
) -> CliResult<()> {
    let cfg = est.config()?;
    let loaded = load(input, format)?;
    let power = fae_power(&loaded.grid, &cfg)?;
    let polar = polar_resample(&power, &cfg)?;
    let out_power = out_power.unwrap_or_else(|| sibling(input, "_power.pgm"));
    let out_polar = out_polar.unwrap_or_else(|| sibling(input, "_polar.csv"));
    grid_to_pgm(&power.grid.map(f64::ln_1p), &out_power, true)?;
    grid_to_csv(&polar.to_grid(), &out_polar)?;
    emit_json(
        &json!({
            "command": "spectrum",
            "input": loaded.describe(input),
            "outputs": [output(&out_power, "pgm"), output(&out_polar, "csv")],
            "metrics": {
                "total_energy": power.total(),
                "n_rho": polar.n_rho(),
                "n_theta": polar.n_theta(),
                "rho_max": polar.rho_max(),
            },
        }),
        dest,
    )
}

/// Flavour and maxval of a PGM input, reused when writing PGM output.
type PgmMeta = (PgmKind, u16);

/// Reads a feature map: stacked-channel CSV, or a single-channel PGM.
fn read_map(path: &Path, channels: usize) -> CliResult<(FeatureMap<f64>, Option<PgmMeta>)> {
    match Format::resolve(None, path)? {
        Format::Csv => Ok((feature_map_from_csv(path, channels)?, None)),
        Format::Pgm => {
            if channels != 1 {
                return Err(CliError::Config(format!(
                    "{} is a PGM, which holds one channel, but channels = {channels}",
                    path.display()
                )));
            }
            let img = read_pgm::<f64>(path)?;
            Ok((
                FeatureMap::from_grid(&img.grid),
                Some((img.kind, img.maxval)),
            ))
        }
    }
}

pub fn fuse(
    low_path: &Path,
    high_path: &Path,
    config: Option<&Path>,
    out: &Path,
    dest: &str,
) -> CliResult<()> {
    let FuseSettings { channels, fusion } = match config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_settings(&text, path.parent().unwrap_or(Path::new(".")))?
        }
        None => parse_settings("", Path::new("."))?,
    };
    let (low, low_pgm) = read_map(low_path, channels)?;
    let (high, _) = read_map(high_path, channels)?;
    let result = faafusion(&low, &high, &fusion)?;

    let out_format = Format::resolve(None, out)?;
    match out_format {
        Format::Csv => feature_map_to_csv(&result.fused, out)?,
        Format::Pgm => {
            if channels != 1 {
                return Err(CliError::Config("PGM output holds a single channel".into()));
            }
            let (kind, maxval) = low_pgm.unwrap_or((PgmKind::Ascii, 255));
            write_pgm(&result.fused.channel(0), out, false, kind, maxval)?;
        }
    }
    let rotations_deg: Vec<f64> = result.rotations.iter().map(|r| r.to_degrees()).collect();
    let rotated = rotations_deg.iter().filter(|r| **r != 0.0).count();
    emit_json(
        &json!({
            "command": "fuse",
            "input": {
                "low": low_path.display().to_string(),
                "high": high_path.display().to_string(),
                "channels": channels,
                "low_shape": [low.channels(), low.height(), low.width()],
                "high_shape": [high.channels(), high.height(), high.width()],
            },
            "outputs": [output(out, out_format.name())],
            "rotations_deg": rotations_deg,
            "metrics": {
                "patches": result.rotations.len(),
                "rotated_patches": rotated,
                "max_abs_rotation_deg": rotations_deg.iter().fold(0.0f64, |m, r| m.max(r.abs())),
            },
        }),
        dest,
    )
}

fn sweep_angles(args: &BenchArgs) -> CliResult<Vec<f64>> {
    if let Some(list) = &args.angles {
        if list.iter().any(|a| !a.is_finite()) {
            return Err(CliError::Config("--angles must be finite".into()));
        }
        return Ok(list.clone());
    }
    if !(args.step > 0.0 && args.start.is_finite() && args.stop.is_finite()) {
        return Err(CliError::Config(
            "sweep needs finite --start/--stop and a positive --step".into(),
        ));
    }
    // count first so that accumulated rounding never drops the last angle
    let n = ((args.stop - args.start) / args.step + 1e-9).floor();
    if n < 0.0 {
        return Ok(Vec::new());
    }
    Ok((0..=n as usize)
        .map(|i| args.start + i as f64 * args.step)
        .collect())
}

fn tag(mut doc: Value, suite: &str) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert("command".into(), json!("bench"));
        map.insert("suite".into(), json!(suite));
    }
    doc
}

pub fn bench(args: &BenchArgs) -> CliResult<()> {
    let cfg = args.est.config()?;
    match args.suite {
        Suite::Angles => {
            let angles: Vec<f64> = sweep_angles(args)?.iter().map(|d| d.to_radians()).collect();
            let opts = SweepOptions {
                antialias: !args.hard,
                oracle_step_deg: (!args.no_oracle).then_some(args.oracle_step),
                timing: args.timing,
            };
            let report = bench_angle_sweep(args.size, args.a, args.b, &angles, &cfg, &opts)?;
            if let Some(path) = &args.csv {
                write_text(path, &report.to_csv())?;
            }
            let doc = serde_json::to_value(&report).expect("report serializes");
            emit_json(&tag(doc, "angles"), &args.json)
        }
        Suite::Equivariance => {
            let start = std::time::Instant::now();
            let degrees = args
                .angles
                .clone()
                .unwrap_or_else(|| vec![15.0, 30.0, 45.0, 60.0, 90.0]);
            let angles: Vec<f64> = degrees.iter().map(|d| d.to_radians()).collect();
            if args.size < 4 || !args.size.is_multiple_of(2) {
                return Err(CliError::Shape(format!(
                    "--size must be even and at least 4, got {}",
                    args.size
                )));
            }
            let image = band_limited_image::<f64>(args.size, args.seed);
            let report = bench_equivariance(&image, &angles, &cfg)?;
            if let Some(path) = &args.csv {
                write_text(path, &report.to_csv())?;
            }
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            if let Value::Object(map) = &mut doc {
                map.insert("seed".into(), json!(args.seed));
                map.insert("size".into(), json!(args.size));
                if args.timing {
                    map.insert(
                        "runtime_ms".into(),
                        json!(start.elapsed().as_secs_f64() * 1e3),
                    );
                }
            }
            emit_json(&tag(doc, "equivariance"), &args.json)
        }
    }
}
