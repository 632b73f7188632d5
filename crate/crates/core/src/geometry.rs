//! Spatial resampling: rotation about the pixel-grid center, orientation
//! alignment, 2x bilinear upsampling and unfold/fold patch handling.

use crate::error::{FaaError, Result};
use crate::grid::{FeatureMap, Grid};
use crate::interp::{bilinear_clamped, bilinear_or_zero};
use crate::scalar::Scalar;
use crate::spectral::{fae, AngleEstimate, FaeConfig};

/// Rotation about `((H-1)/2, (W-1)/2)` with bilinear sampling and zero fill.
///
/// Positive angles turn counterclockwise in the `(x = col, y = row)` frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec<T> {
    pub angle: T,
}

impl<T: Scalar> RotationSpec<T> {
    pub fn new(angle: T) -> Self {
        RotationSpec { angle }
    }

    pub fn center(height: usize, width: usize) -> (T, T) {
        let half = T::of(0.5);
        (
            T::of_usize(height - 1) * half,
            T::of_usize(width - 1) * half,
        )
    }

    /// `(cos, sin)` with exact values at multiples of a quarter turn.
    fn cos_sin(&self) -> (T, T) {
        let quarter = T::FRAC_PI_2();
        let k = (self.angle / quarter).round();
        let tol = T::epsilon() * T::of(64.0) * self.angle.abs().max(T::one());
        if (self.angle - k * quarter).abs() <= tol {
            let k = k.to_i64().unwrap_or(0).rem_euclid(4);
            let (c, s) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][k as usize];
            return (T::of(c), T::of(s));
        }
        (self.angle.cos(), self.angle.sin())
    }
}

/// Rotates `g` by inverse mapping: each output pixel samples the input at
/// `R(-angle)` applied to its offset from the center.
pub fn rotate<T: Scalar>(g: &Grid<T>, spec: &RotationSpec<T>) -> Result<Grid<T>> {
    if !spec.angle.is_finite() {
        return Err(FaaError::Config("rotation angle must be finite".into()));
    }
    g.ensure_finite()?;
    Ok(rotate_unchecked(g, spec))
}

pub(crate) fn rotate_unchecked<T: Scalar>(g: &Grid<T>, spec: &RotationSpec<T>) -> Grid<T> {
    let (cos, sin) = spec.cos_sin();
    let (cy, cx) = RotationSpec::<T>::center(g.height(), g.width());
    Grid::from_fn(g.height(), g.width(), |r, c| {
        let dx = T::of_usize(c) - cx;
        let dy = T::of_usize(r) - cy;
        let sx = cx + (cos * dx + sin * dy);
        let sy = cy + (cos * dy - sin * dx);
        bilinear_or_zero(g, sx, sy)
    })
}

/// Rotates `g` so its dominant spectral direction lands on `theta0`.
///
/// Returns the input unchanged when the estimate is degenerate.
pub fn faa_align<T: Scalar>(
    g: &Grid<T>,
    theta0: T,
    cfg: &FaeConfig,
) -> Result<(Grid<T>, AngleEstimate<T>)> {
    let est = fae(g, cfg)?;
    if est.degenerate {
        return Ok((g.clone(), est));
    }
    let out = rotate_unchecked(g, &RotationSpec::new(theta0 - est.theta_hat));
    Ok((out, est))
}

/// Bilinear 2x upsampling with half-pixel centers and edge clamping.
pub fn upsample2x<T: Scalar>(f: &FeatureMap<T>) -> FeatureMap<T> {
    let (ch, h, w) = f.shape();
    let grids: Vec<Grid<T>> = f.channel_grids();
    let half = T::of(0.5);
    let src = |i: usize| (T::of_usize(i) + half) * half - half;
    FeatureMap::from_fn(ch, 2 * h, 2 * w, |c, r, x| {
        bilinear_clamped(&grids[c], src(x), src(r))
    })
}

/// Patch extraction layout.
///
/// Patch `(i, j)` has its top-left corner at
/// `(i * stride - padding, j * stride - padding)`; `padding_end` extends the
/// canvas on the bottom/right so the position count per axis is
/// `(len + padding + padding_end - kernel) / stride + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchSpec {
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    pub padding_end: usize,
    pub normalize_fold: bool,
}

impl Default for PatchSpec {
    fn default() -> Self {
        PatchSpec::tiled(8)
    }
}

impl PatchSpec {
    /// Non-overlapping `k x k` tiles.
    pub fn tiled(kernel: usize) -> Self {
        PatchSpec {
            kernel,
            stride: kernel,
            padding: 0,
            padding_end: 0,
            normalize_fold: true,
        }
    }

    /// One patch per pixel (stride 1). Pixel `p` sits at patch index
    /// `kernel / 2`, matching the spectrum center convention.
    pub fn dense(kernel: usize) -> Self {
        PatchSpec {
            kernel,
            stride: 1,
            padding: kernel / 2,
            padding_end: (kernel - 1) - kernel / 2,
            normalize_fold: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kernel == 0 {
            return Err(FaaError::Config("patch kernel must be positive".into()));
        }
        if self.stride == 0 || self.stride > self.kernel {
            return Err(FaaError::Config(format!(
                "stride must be in 1..={}, got {}",
                self.kernel, self.stride
            )));
        }
        if self.padding >= self.kernel || self.padding_end >= self.kernel {
            return Err(FaaError::Config(format!(
                "padding ({}, {}) must be smaller than the kernel {}",
                self.padding, self.padding_end, self.kernel
            )));
        }
        Ok(())
    }

    /// Number of patch positions along an axis of length `len`.
    pub fn positions(&self, len: usize) -> Result<usize> {
        let span = len + self.padding + self.padding_end;
        if span < self.kernel || !(span - self.kernel).is_multiple_of(self.stride) {
            return Err(FaaError::Shape(format!(
                "axis of length {len} does not tile with kernel {}, stride {}, padding ({}, {})",
                self.kernel, self.stride, self.padding, self.padding_end
            )));
        }
        Ok((span - self.kernel) / self.stride + 1)
    }
}

/// One extracted patch and the canvas position of its top-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch<T> {
    pub top: isize,
    pub left: isize,
    pub data: FeatureMap<T>,
}

/// Patches in row-major position order.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSet<T> {
    pub rows: usize,
    pub cols: usize,
    pub patches: Vec<Patch<T>>,
}

impl<T: Scalar> PatchSet<T> {
    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// Same positions, new contents.
    pub fn map(&self, f: impl Fn(&Patch<T>) -> FeatureMap<T>) -> Self {
        PatchSet {
            rows: self.rows,
            cols: self.cols,
            patches: self
                .patches
                .iter()
                .map(|p| Patch {
                    top: p.top,
                    left: p.left,
                    data: f(p),
                })
                .collect(),
        }
    }
}

pub fn unfold<T: Scalar>(f: &FeatureMap<T>, spec: &PatchSpec) -> Result<PatchSet<T>> {
    spec.validate()?;
    let (ch, h, w) = f.shape();
    let rows = spec.positions(h)?;
    let cols = spec.positions(w)?;
    let k = spec.kernel;
    let mut patches = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let top = (i * spec.stride) as isize - spec.padding as isize;
            let left = (j * spec.stride) as isize - spec.padding as isize;
            let data = FeatureMap::from_fn(ch, k, k, |c, r, x| {
                let y = top + r as isize;
                let xx = left + x as isize;
                if y < 0 || xx < 0 || y >= h as isize || xx >= w as isize {
                    T::zero()
                } else {
                    f.get(c, y as usize, xx as usize)
                }
            });
            patches.push(Patch { top, left, data });
        }
    }
    Ok(PatchSet {
        rows,
        cols,
        patches,
    })
}

/// Overlap-adds patches onto a `(channels, height, width)` canvas, dividing
/// by the per-pixel contribution count when `normalize_fold` is set.
pub fn fold<T: Scalar>(
    p: &PatchSet<T>,
    spec: &PatchSpec,
    out_shape: (usize, usize, usize),
) -> Result<FeatureMap<T>> {
    spec.validate()?;
    let (ch, h, w) = out_shape;
    let rows = spec.positions(h)?;
    let cols = spec.positions(w)?;
    if p.rows != rows || p.cols != cols || p.patches.len() != rows * cols {
        return Err(FaaError::Shape(format!(
            "patch set has {}x{} positions ({} patches), layout needs {rows}x{cols}",
            p.rows,
            p.cols,
            p.patches.len()
        )));
    }
    let k = spec.kernel;
    let mut acc = vec![T::zero(); ch * h * w];
    let mut count = vec![0usize; h * w];
    for (idx, patch) in p.patches.iter().enumerate() {
        let (i, j) = (idx / cols, idx % cols);
        let top = (i * spec.stride) as isize - spec.padding as isize;
        let left = (j * spec.stride) as isize - spec.padding as isize;
        if patch.top != top || patch.left != left || patch.data.shape() != (ch, k, k) {
            return Err(FaaError::Shape(format!(
                "patch {idx} at ({}, {}) with shape {:?} does not match position ({top}, {left}) and shape {:?}",
                patch.top,
                patch.left,
                patch.data.shape(),
                (ch, k, k)
            )));
        }
        for r in 0..k {
            let y = top + r as isize;
            if y < 0 || y >= h as isize {
                continue;
            }
            for x in 0..k {
                let xx = left + x as isize;
                if xx < 0 || xx >= w as isize {
                    continue;
                }
                let pix = y as usize * w + xx as usize;
                count[pix] += 1;
                for c in 0..ch {
                    acc[c * h * w + pix] = acc[c * h * w + pix] + patch.data.get(c, r, x);
                }
            }
        }
    }
    if spec.normalize_fold {
        for c in 0..ch {
            for (pix, &n) in count.iter().enumerate() {
                if n > 1 {
                    acc[c * h * w + pix] = acc[c * h * w + pix] / T::of_usize(n);
                }
            }
        }
    }
    FeatureMap::new(ch, h, w, acc)
}

/// Contribution count per pixel for a layout, as a single-channel map.
pub fn fold_counts<T: Scalar>(
    spec: &PatchSpec,
    height: usize,
    width: usize,
) -> Result<FeatureMap<T>> {
    let ones = FeatureMap::filled(1, height, width, T::one());
    let set =
        unfold(&ones, spec)?.map(|_| FeatureMap::filled(1, spec.kernel, spec.kernel, T::one()));
    let raw = PatchSpec {
        normalize_fold: false,
        ..*spec
    };
    fold(&set, &raw, (1, height, width))
}
