//! Reading and writing grids in the format implied by a flag or file extension.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use faa_core::io::{grid_from_csv, grid_to_csv, read_pgm, write_pgm, PgmKind};
use faa_core::Grid;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pgm,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Pgm => "pgm",
            Format::Csv => "csv",
        }
    }

    /// Explicit choice, else the extension of `path`.
    pub fn resolve(explicit: Option<Format>, path: &Path) -> CliResult<Format> {
        if let Some(f) = explicit {
            return Ok(f);
        }
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("pgm") => Ok(Format::Pgm),
            Some("csv") => Ok(Format::Csv),
            _ => Err(CliError::Config(format!(
                "cannot infer the format of {}; pass --format pgm|csv",
                path.display()
            ))),
        }
    }
}

/// A loaded grid plus what is needed to write a result back in the same format.
pub struct Loaded {
    pub grid: Grid<f64>,
    pub format: Format,
    pgm: Option<(PgmKind, u16)>,
}

impl Loaded {
    pub fn read(path: &Path, format: Format) -> CliResult<Loaded> {
        Ok(match format {
            Format::Csv => Loaded {
                grid: grid_from_csv(path)?,
                format,
                pgm: None,
            },
            Format::Pgm => {
                let img = read_pgm::<f64>(path)?;
                Loaded {
                    grid: img.grid,
                    format,
                    pgm: Some((img.kind, img.maxval)),
                }
            }
        })
    }

    /// Writes `g` like the input: exact CSV, or a PGM with the input's
    /// flavour and maxval (values rounded and clamped).
    pub fn write_like(&self, g: &Grid<f64>, path: &Path) -> CliResult<()> {
        match (self.format, self.pgm) {
            (Format::Pgm, Some((kind, maxval))) => write_pgm(g, path, false, kind, maxval)?,
            _ => grid_to_csv(g, path)?,
        }
        Ok(())
    }

    pub fn describe(&self, path: &Path) -> Value {
        serde_json::json!({
            "path": path.display().to_string(),
            "format": self.format.name(),
            "height": self.grid.height(),
            "width": self.grid.width(),
        })
    }
}

/// `<dir>/<stem><suffix>` next to `input`.
pub fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    input.with_file_name(format!("{stem}{suffix}"))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Sends a JSON document to stdout (`-`) or a file.
pub fn emit_json(doc: &Value, dest: &str) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("json value serializes");
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
    } else {
        write_text(Path::new(dest), &format!("{text}\n"))
    }
}
