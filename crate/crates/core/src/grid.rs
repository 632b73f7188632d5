//! Value types: real grids, multi-channel feature maps, complex spectra and
//! dense matrices.
//!
//! Storage is row-major with index `(row, col)`; a spatial point `(x, y)`
//! maps to `(col, row)`. All operations return new values and never mutate
//! their inputs.

use num_complex::Complex;

use crate::error::{FaaError, Result};
use crate::scalar::Scalar;

/// Single-channel real 2D array.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    pub fn new(height: usize, width: usize, data: Vec<T>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(FaaError::Shape(format!(
                "grid dimensions must be positive, got {height}x{width}"
            )));
        }
        if data.len() != height * width {
            return Err(FaaError::Shape(format!(
                "{height}x{width} grid needs {} values, got {}",
                height * width,
                data.len()
            )));
        }
        Ok(Grid {
            height,
            width,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, T::zero())
    }

    pub fn filled(height: usize, width: usize, value: T) -> Self {
        assert!(height > 0 && width > 0, "grid dimensions must be positive");
        Grid {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    /// Builds a grid by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(height > 0 && width > 0, "grid dimensions must be positive");
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Grid {
            height,
            width,
            data,
        }
    }

    /// Builds a grid from nested rows, mostly for tests and literals.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(FaaError::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
        }
        Self::new(height, width, rows.concat())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn is_square(&self) -> bool {
        self.height == self.width
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.width..(row + 1) * self.width]
    }

    /// Checks every value is finite, reporting the first offending flat index.
    pub fn ensure_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(FaaError::NonFinite(i)),
            None => Ok(()),
        }
    }

    /// Requires a square grid and returns its side length.
    pub fn square_size(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(FaaError::NonSquare {
                height: self.height,
                width: self.width,
            });
        }
        Ok(self.height)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Grid {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn add_scalar(&self, s: T) -> Self {
        self.map(|v| v + s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(FaaError::Shape(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Grid {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sum(&self) -> T {
        self.data.iter().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.sum() / T::of_usize(self.data.len())
    }

    pub fn min_max(&self) -> (T, T) {
        self.data
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    /// Largest absolute elementwise difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Grid<U> {
        Grid {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|v| U::of(v.to_f64_lossy())).collect(),
        }
    }
}

/// `C x H x W` real tensor, channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap<T> {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> FeatureMap<T> {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<T>) -> Result<Self> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(FaaError::Shape(format!(
                "feature map dimensions must be positive, got {channels}x{height}x{width}"
            )));
        }
        if data.len() != channels * height * width {
            return Err(FaaError::Shape(format!(
                "{channels}x{height}x{width} feature map needs {} values, got {}",
                channels * height * width,
                data.len()
            )));
        }
        Ok(FeatureMap {
            channels,
            height,
            width,
            data,
        })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Self::filled(channels, height, width, T::zero())
    }

    pub fn filled(channels: usize, height: usize, width: usize, value: T) -> Self {
        assert!(channels > 0 && height > 0 && width > 0);
        FeatureMap {
            channels,
            height,
            width,
            data: vec![value; channels * height * width],
        }
    }

    pub fn from_fn(
        channels: usize,
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        assert!(channels > 0 && height > 0 && width > 0);
        let mut data = Vec::with_capacity(channels * height * width);
        for c in 0..channels {
            for r in 0..height {
                for x in 0..width {
                    data.push(f(c, r, x));
                }
            }
        }
        FeatureMap {
            channels,
            height,
            width,
            data,
        }
    }

    /// Stacks equally-shaped grids as channels.
    pub fn from_channels(grids: &[Grid<T>]) -> Result<Self> {
        let first = grids
            .first()
            .ok_or_else(|| FaaError::Shape("no channels given".into()))?;
        let (h, w) = first.shape();
        let mut data = Vec::with_capacity(grids.len() * h * w);
        for g in grids {
            if g.shape() != (h, w) {
                return Err(FaaError::Shape(format!(
                    "channel shape {:?} differs from {:?}",
                    g.shape(),
                    (h, w)
                )));
            }
            data.extend_from_slice(g.data());
        }
        Self::new(grids.len(), h, w, data)
    }

    pub fn from_grid(g: &Grid<T>) -> Self {
        FeatureMap {
            channels: 1,
            height: g.height(),
            width: g.width(),
            data: g.data().to_vec(),
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> T {
        self.data[(channel * self.height + row) * self.width + col]
    }

    pub fn channel_slice(&self, channel: usize) -> &[T] {
        let n = self.height * self.width;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn channel(&self, channel: usize) -> Grid<T> {
        Grid {
            height: self.height,
            width: self.width,
            data: self.channel_slice(channel).to_vec(),
        }
    }

    pub fn channel_grids(&self) -> Vec<Grid<T>> {
        (0..self.channels).map(|c| self.channel(c)).collect()
    }

    /// Per-pixel mean over channels.
    pub fn channel_mean(&self) -> Grid<T> {
        let n = self.height * self.width;
        let inv = T::one() / T::of_usize(self.channels);
        let mut acc = vec![T::zero(); n];
        for c in 0..self.channels {
            for (a, &v) in acc.iter_mut().zip(self.channel_slice(c)) {
                *a = *a + v;
            }
        }
        Grid {
            height: self.height,
            width: self.width,
            data: acc.into_iter().map(|v| v * inv).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        FeatureMap {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(FaaError::Shape(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(FeatureMap {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Square complex spectrum indexed `(v, u)`: row = vertical frequency,
/// column = horizontal frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    size: usize,
    data: Vec<Complex<T>>,
    centered: bool,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(size: usize, data: Vec<Complex<T>>, centered: bool) -> Result<Self> {
        if size == 0 || data.len() != size * size {
            return Err(FaaError::Shape(format!(
                "spectrum of size {size} needs {} values, got {}",
                size * size,
                data.len()
            )));
        }
        Ok(Spectrum {
            size,
            data,
            centered,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// True when the zero frequency sits at `(size/2, size/2)`.
    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn with_centered(mut self, centered: bool) -> Self {
        self.centered = centered;
        self
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, v: usize, u: usize) -> Complex<T> {
        self.data[v * self.size + u]
    }
}

/// Dense row-major matrix used for channel projections and affine layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(FaaError::Shape(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    /// `M x`, accumulating each row left to right.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(FaaError::Shape(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                x.len()
            )));
        }
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&w, &v)| acc + w * v)
            })
            .collect())
    }
}

impl<T: Scalar> From<Grid<T>> for Matrix<T> {
    fn from(g: Grid<T>) -> Self {
        Matrix {
            rows: g.height(),
            cols: g.width(),
            data: g.into_data(),
        }
    }
}

impl<T: Scalar> From<Matrix<T>> for Grid<T> {
    fn from(m: Matrix<T>) -> Self {
        Grid {
            height: m.rows,
            width: m.cols,
            data: m.data,
        }
    }
}
