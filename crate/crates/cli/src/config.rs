//! `key=value` configuration for the fusion command.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys,
//! repeated keys and unparsable values are rejected with their line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use faa_core::io::matrix_from_csv;
use faa_core::{FaeConfig, FusionConfig, PatchSpec, ProjectionSpec, Window};

use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &[
    "channels",
    "c_mid",
    "patch",
    "kernel",
    "stride",
    "padding",
    "padding_end",
    "normalize_fold",
    "n_theta",
    "n_rho",
    "energy_floor",
    "window",
    "proj_low",
    "proj_high",
    "proj_out",
];

#[derive(Debug)]
pub struct FuseSettings {
    pub channels: usize,
    pub fusion: FusionConfig<f64>,
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries {
    map: BTreeMap<&'static str, Entry>,
    base: PathBuf,
}

impl Entries {
    fn parse<V: FromStr>(&self, key: &str) -> CliResult<Option<V>> {
        let Some(e) = self.map.get(key) else {
            return Ok(None);
        };
        e.value.parse().map(Some).map_err(|_| {
            CliError::Config(format!(
                "line {}: bad value {:?} for {key}",
                e.line, e.value
            ))
        })
    }

    fn projection(&self, key: &str, out: usize) -> CliResult<ProjectionSpec<f64>> {
        let Some(e) = self.map.get(key) else {
            return Ok(ProjectionSpec::IdentityTruncate { out });
        };
        match e.value.as_str() {
            "identity" => Ok(ProjectionSpec::IdentityTruncate { out }),
            "average" => Ok(ProjectionSpec::AverageGroups { out }),
            v => match v.strip_prefix("matrix:") {
                Some(rel) => Ok(ProjectionSpec::Matrix(matrix_from_csv(
                    self.base.join(rel.trim()),
                )?)),
                None => Err(CliError::Config(format!(
                    "line {}: {key} must be identity, average or matrix:<path>, got {v:?}",
                    e.line
                ))),
            },
        }
    }
}

pub fn parse_settings(text: &str, base: &Path) -> CliResult<FuseSettings> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {line}: expected key=value, got {trimmed:?}"))
        })?;
        let key = key.trim();
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| CliError::Config(format!("line {line}: unknown key {key:?}")))?;
        let entry = Entry {
            line,
            value: value.trim().to_string(),
        };
        if map.insert(*known, entry).is_some() {
            return Err(CliError::Config(format!("line {line}: {key} is set twice")));
        }
    }
    let e = Entries {
        map,
        base: base.to_path_buf(),
    };

    let channels: usize = e.parse("channels")?.unwrap_or(1);
    let c_mid: usize = e.parse("c_mid")?.unwrap_or(channels);
    let kernel: usize = e.parse("kernel")?.unwrap_or(8);
    let mut patch = match e.parse::<String>("patch")?.as_deref() {
        None | Some("tiled") => PatchSpec::tiled(kernel),
        Some("dense") => PatchSpec::dense(kernel),
        Some(other) => {
            let line = e.map["patch"].line;
            return Err(CliError::Config(format!(
                "line {line}: patch must be tiled or dense, got {other:?}"
            )));
        }
    };
    if let Some(v) = e.parse("stride")? {
        patch.stride = v;
    }
    if let Some(v) = e.parse("padding")? {
        patch.padding = v;
    }
    if let Some(v) = e.parse("padding_end")? {
        patch.padding_end = v;
    }
    if let Some(v) = e.parse("normalize_fold")? {
        patch.normalize_fold = v;
    }

    let defaults = FaeConfig::default();
    let fae = FaeConfig {
        n_theta: e.parse("n_theta")?.unwrap_or(defaults.n_theta),
        n_rho: e.parse::<usize>("n_rho")?.or(defaults.n_rho),
        energy_floor: e.parse("energy_floor")?.unwrap_or(defaults.energy_floor),
        window: match e.map.get("window") {
            None => defaults.window,
            Some(entry) => Window::from_str(&entry.value)
                .map_err(|err| CliError::Config(format!("line {}: {err}", entry.line)))?,
        },
    };

    let fusion = FusionConfig {
        c_mid,
        patch,
        fae,
        proj_low: e.projection("proj_low", c_mid)?,
        proj_high: e.projection("proj_high", c_mid)?,
        proj_out: e.projection("proj_out", channels)?,
    };
    fusion
        .validate(channels)
        .map_err(|err| CliError::Config(err.to_string()))?;
    Ok(FuseSettings { channels, fusion })
}
