//! File formats: comma-separated grids and binary/ASCII PGM.
//!
//! CSV values are written with the shortest representation that parses back
//! to the same bits, so a write/read cycle is exact for every finite value.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{FaaError, Result};
use crate::grid::{FeatureMap, Grid, Matrix};
use crate::scalar::Scalar;

/// PGM flavour: `P2` is ASCII, `P5` is binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmKind {
    Ascii,
    Binary,
}

/// A decoded PGM with the header fields needed to write it back.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmImage<T> {
    pub grid: Grid<T>,
    pub maxval: u16,
    pub kind: PgmKind,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| FaaError::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| FaaError::io(path, e))
}

/// Parses CSV text into a grid. Blank trailing lines are ignored.
pub fn parse_csv<T: Scalar>(text: &str) -> Result<Grid<T>> {
    let mut lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(FaaError::Shape("CSV contains no rows".into()));
    }

    let mut width = None;
    let mut data = Vec::new();
    for (r, line) in lines.iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let expected = *width.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(FaaError::RaggedRow {
                row: r + 1,
                expected,
                found: cells.len(),
            });
        }
        for (c, cell) in cells.iter().enumerate() {
            let text = cell.trim();
            match text.parse::<T>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    return Err(FaaError::BadCell {
                        row: r + 1,
                        column: c + 1,
                        text: text.to_string(),
                    })
                }
            }
        }
    }
    Grid::new(lines.len(), width.unwrap_or(0), data)
}

pub fn format_csv<T: Scalar>(g: &Grid<T>) -> String {
    let mut out = String::with_capacity(g.data().len() * 12);
    for r in 0..g.height() {
        for (c, v) in g.row(r).iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{v}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn grid_from_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<Grid<T>> {
    parse_csv(&read_to_string(path.as_ref())?)
}

pub fn grid_to_csv<T: Scalar>(g: &Grid<T>, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), format_csv(g).as_bytes())
}

/// Reads a matrix stored one row per line.
pub fn matrix_from_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>> {
    Ok(grid_from_csv::<T>(path)?.into())
}

pub fn matrix_to_csv<T: Scalar>(m: &Matrix<T>, path: impl AsRef<Path>) -> Result<()> {
    grid_to_csv(&Grid::from(m.clone()), path)
}

/// Reads a vector stored either as a single row or a single column.
pub fn vector_from_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let g = grid_from_csv::<T>(path.as_ref())?;
    if g.height() != 1 && g.width() != 1 {
        return Err(FaaError::Shape(format!(
            "{}: expected a single row or column, got {}x{}",
            path.as_ref().display(),
            g.height(),
            g.width()
        )));
    }
    Ok(g.into_data())
}

/// Writes a vector as a single column.
pub fn vector_to_csv<T: Scalar>(v: &[T], path: impl AsRef<Path>) -> Result<()> {
    grid_to_csv(&Grid::new(v.len(), 1, v.to_vec())?, path)
}

/// Reads a feature map whose channels are stacked vertically in one CSV grid.
pub fn feature_map_from_csv<T: Scalar>(
    path: impl AsRef<Path>,
    channels: usize,
) -> Result<FeatureMap<T>> {
    let g = grid_from_csv::<T>(path)?;
    if channels == 0 || g.height() % channels != 0 {
        return Err(FaaError::Shape(format!(
            "{} rows cannot be split into {channels} channels",
            g.height()
        )));
    }
    FeatureMap::new(channels, g.height() / channels, g.width(), g.into_data())
}

pub fn feature_map_to_csv<T: Scalar>(f: &FeatureMap<T>, path: impl AsRef<Path>) -> Result<()> {
    let g = Grid::new(f.channels() * f.height(), f.width(), f.data().to_vec())?;
    grid_to_csv(&g, path)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<usize> {
        let tok = self
            .token()
            .ok_or_else(|| FaaError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| {
                FaaError::MalformedHeader(format!(
                    "{what} is not a number: {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Decodes an in-memory P2 or P5 image.
pub fn parse_pgm<T: Scalar>(bytes: &[u8]) -> Result<PgmImage<T>> {
    let mut cur = Cursor { bytes, pos: 0 };
    let kind = match cur.token() {
        Some(b"P2") => PgmKind::Ascii,
        Some(b"P5") => PgmKind::Binary,
        other => {
            return Err(FaaError::MalformedHeader(format!(
                "unsupported magic {:?}",
                other.map(String::from_utf8_lossy)
            )))
        }
    };
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(FaaError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    let max_allowed = if kind == PgmKind::Binary { 255 } else { 65535 };
    if maxval == 0 || maxval > max_allowed {
        return Err(FaaError::MalformedHeader(format!(
            "maxval {maxval} outside 1..={max_allowed}"
        )));
    }

    let expected = width * height;
    let mut data = Vec::with_capacity(expected);
    match kind {
        PgmKind::Ascii => {
            while data.len() < expected {
                let Some(tok) = cur.token() else { break };
                let v = std::str::from_utf8(tok)
                    .ok()
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&v| v <= maxval)
                    .ok_or_else(|| {
                        FaaError::MalformedHeader(format!(
                            "bad sample {:?}",
                            String::from_utf8_lossy(tok)
                        ))
                    })?;
                data.push(T::of_usize(v));
            }
        }
        PgmKind::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            let start = cur.pos + 1;
            let raster = bytes.get(start..).unwrap_or(&[]);
            data.extend(
                raster
                    .iter()
                    .take(expected)
                    .map(|&b| T::of_usize(b as usize)),
            );
            if let Some(&b) = raster.iter().take(expected).find(|&&b| b as usize > maxval) {
                return Err(FaaError::MalformedHeader(format!(
                    "sample {b} exceeds maxval {maxval}"
                )));
            }
        }
    }
    if data.len() < expected {
        return Err(FaaError::TruncatedPayload {
            expected,
            found: data.len(),
        });
    }
    Ok(PgmImage {
        grid: Grid::new(height, width, data)?,
        maxval: maxval as u16,
        kind,
    })
}

pub fn read_pgm<T: Scalar>(path: impl AsRef<Path>) -> Result<PgmImage<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| FaaError::io(path, e))?;
    parse_pgm(&bytes)
}

pub fn grid_from_pgm<T: Scalar>(path: impl AsRef<Path>) -> Result<Grid<T>> {
    Ok(read_pgm(path)?.grid)
}

/// Quantizes a grid to integer samples in `0..=maxval`.
///
/// With `normalize`, `[min, max]` maps affinely onto `[0, maxval]` and a
/// constant grid maps to 0. Otherwise values are rounded and clamped.
pub fn quantize<T: Scalar>(g: &Grid<T>, normalize: bool, maxval: u16) -> Vec<u16> {
    let top = maxval as f64;
    let (lo, hi) = g.min_max();
    let (lo, hi) = (lo.to_f64_lossy(), hi.to_f64_lossy());
    g.data()
        .iter()
        .map(|v| {
            let v = v.to_f64_lossy();
            let q = if normalize {
                if hi > lo {
                    (v - lo) / (hi - lo) * top
                } else {
                    0.0
                }
            } else {
                v
            };
            q.round().clamp(0.0, top) as u16
        })
        .collect()
}

pub fn format_pgm<T: Scalar>(g: &Grid<T>, normalize: bool, kind: PgmKind, maxval: u16) -> Vec<u8> {
    let samples = quantize(g, normalize, maxval);
    let magic = match kind {
        PgmKind::Ascii => "P2",
        PgmKind::Binary => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n{maxval}\n", g.width(), g.height()).into_bytes();
    match kind {
        PgmKind::Ascii => {
            for row in samples.chunks(g.width()) {
                let line: Vec<String> = row.iter().map(u16::to_string).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmKind::Binary => out.extend(samples.iter().map(|&s| s.min(255) as u8)),
    }
    out
}

/// Writes an ASCII (P2) PGM with maxval 255.
pub fn grid_to_pgm<T: Scalar>(g: &Grid<T>, path: impl AsRef<Path>, normalize: bool) -> Result<()> {
    write_bytes(
        path.as_ref(),
        &format_pgm(g, normalize, PgmKind::Ascii, 255),
    )
}

pub fn write_pgm<T: Scalar>(
    g: &Grid<T>,
    path: impl AsRef<Path>,
    normalize: bool,
    kind: PgmKind,
    maxval: u16,
) -> Result<()> {
    if kind == PgmKind::Binary && maxval > 255 {
        return Err(FaaError::Config(format!(
            "binary PGM supports maxval up to 255, got {maxval}"
        )));
    }
    write_bytes(path.as_ref(), &format_pgm(g, normalize, kind, maxval))
}
