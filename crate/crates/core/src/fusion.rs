//! Orientation-aligned cross-scale fusion for one lateral merge of a feature
//! pyramid.
//!
//! The high-level map is upsampled, both maps are projected to `c_mid`
//! channels and cut into patches. For every patch position the dominant
//! direction of the low-level patch becomes the target for the high-level
//! patch, which is rotated onto it. The rotated patches are folded back,
//! projected to the output channel count and added to the low-level map and
//! the plain upsampled map.

use rayon::prelude::*;

use crate::error::{FaaError, Result};
use crate::geometry::{
    fold, rotate_unchecked, unfold, upsample2x, PatchSet, PatchSpec, RotationSpec,
};
use crate::grid::{FeatureMap, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{fae, AngleEstimate, FaeConfig};

/// Per-pixel linear channel map standing in for a 1x1 convolution.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionSpec<T> {
    /// Keeps the first `out` channels.
    IdentityTruncate { out: usize },
    /// Averages `in / out` contiguous channels into each output channel.
    AverageGroups { out: usize },
    /// Explicit weights, rows = output channels, columns = input channels.
    Matrix(Matrix<T>),
}

impl<T: Scalar> ProjectionSpec<T> {
    /// Output channel count for `input` channels, validating compatibility.
    pub fn output_channels(&self, input: usize) -> Result<usize> {
        match self {
            ProjectionSpec::IdentityTruncate { out } => {
                if *out == 0 || *out > input {
                    return Err(FaaError::Shape(format!(
                        "identity projection to {out} channels needs 1..={input}"
                    )));
                }
                Ok(*out)
            }
            ProjectionSpec::AverageGroups { out } => {
                if *out == 0 || !input.is_multiple_of(*out) {
                    return Err(FaaError::Shape(format!(
                        "cannot average {input} channels into {out} equal groups"
                    )));
                }
                Ok(*out)
            }
            ProjectionSpec::Matrix(m) => {
                if m.cols() != input {
                    return Err(FaaError::Shape(format!(
                        "projection matrix has {} columns for {input} input channels",
                        m.cols()
                    )));
                }
                Ok(m.rows())
            }
        }
    }
}

pub fn project_channels<T: Scalar>(
    f: &FeatureMap<T>,
    p: &ProjectionSpec<T>,
) -> Result<FeatureMap<T>> {
    let (ch, h, w) = f.shape();
    let out = p.output_channels(ch)?;
    let n = h * w;
    let data = match p {
        ProjectionSpec::IdentityTruncate { .. } => f.data()[..out * n].to_vec(),
        ProjectionSpec::AverageGroups { .. } => {
            let group = ch / out;
            let inv = T::one() / T::of_usize(group);
            let mut data = vec![T::zero(); out * n];
            for o in 0..out {
                let dst = &mut data[o * n..(o + 1) * n];
                for c in o * group..(o + 1) * group {
                    for (d, &v) in dst.iter_mut().zip(f.channel_slice(c)) {
                        *d = *d + v;
                    }
                }
                for d in dst.iter_mut() {
                    *d = *d * inv;
                }
            }
            data
        }
        ProjectionSpec::Matrix(m) => {
            let mut data = vec![T::zero(); out * n];
            for o in 0..out {
                let dst = &mut data[o * n..(o + 1) * n];
                for c in 0..ch {
                    let wgt = m.get(o, c);
                    for (d, &v) in dst.iter_mut().zip(f.channel_slice(c)) {
                        *d = *d + wgt * v;
                    }
                }
            }
            data
        }
    };
    FeatureMap::new(out, h, w, data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionConfig<T> {
    pub c_mid: usize,
    pub patch: PatchSpec,
    pub fae: FaeConfig,
    pub proj_low: ProjectionSpec<T>,
    pub proj_high: ProjectionSpec<T>,
    pub proj_out: ProjectionSpec<T>,
}

impl<T: Scalar> FusionConfig<T> {
    /// Weight-free configuration: identity projections, 8x8 tiles.
    pub fn identity(channels: usize) -> Self {
        FusionConfig {
            c_mid: channels,
            patch: PatchSpec::tiled(8),
            fae: FaeConfig::default(),
            proj_low: ProjectionSpec::IdentityTruncate { out: channels },
            proj_high: ProjectionSpec::IdentityTruncate { out: channels },
            proj_out: ProjectionSpec::IdentityTruncate { out: channels },
        }
    }

    pub fn validate(&self, channels: usize) -> Result<()> {
        self.fae.validate()?;
        self.patch.validate()?;
        if self.c_mid == 0 || self.c_mid > channels {
            return Err(FaaError::Config(format!(
                "c_mid must be in 1..={channels}, got {}",
                self.c_mid
            )));
        }
        if self.patch.kernel < 4 || !self.patch.kernel.is_multiple_of(2) {
            return Err(FaaError::Config(format!(
                "fusion patches must be even and at least 4 wide, got {}",
                self.patch.kernel
            )));
        }
        for (name, proj, input, want) in [
            ("proj_low", &self.proj_low, channels, self.c_mid),
            ("proj_high", &self.proj_high, channels, self.c_mid),
            ("proj_out", &self.proj_out, self.c_mid, channels),
        ] {
            let got = proj
                .output_channels(input)
                .map_err(|e| FaaError::Config(format!("{name}: {e}")))?;
            if got != want {
                return Err(FaaError::Config(format!(
                    "{name} produces {got} channels, expected {want}"
                )));
            }
        }
        Ok(())
    }
}

/// Fused map plus the intermediate quantities, for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionOutput<T> {
    pub fused: FeatureMap<T>,
    pub upsampled: FeatureMap<T>,
    pub reconstructed: FeatureMap<T>,
    /// Estimate on each projected low-level patch (the target direction).
    pub low_estimates: Vec<AngleEstimate<T>>,
    /// Estimate on each projected high-level patch.
    pub high_estimates: Vec<AngleEstimate<T>>,
    /// Rotation applied to each high-level patch; zero when either side was degenerate.
    pub rotations: Vec<T>,
}

struct PatchResult<T> {
    low: AngleEstimate<T>,
    high: AngleEstimate<T>,
    rotation: T,
    patch: FeatureMap<T>,
}

fn align_patch<T: Scalar>(
    low: &FeatureMap<T>,
    high: &FeatureMap<T>,
    cfg: &FaeConfig,
) -> Result<PatchResult<T>> {
    let low_est = fae(&low.channel_mean(), cfg)?;
    let high_est = fae(&high.channel_mean(), cfg)?;
    if low_est.degenerate || high_est.degenerate {
        return Ok(PatchResult {
            low: low_est,
            high: high_est,
            rotation: T::zero(),
            patch: high.clone(),
        });
    }
    let rotation = low_est.theta_hat - high_est.theta_hat;
    let spec = RotationSpec::new(rotation);
    let rotated: Vec<_> = high
        .channel_grids()
        .iter()
        .map(|g| rotate_unchecked(g, &spec))
        .collect();
    Ok(PatchResult {
        low: low_est,
        high: high_est,
        rotation,
        patch: FeatureMap::from_channels(&rotated)?,
    })
}

/// Fuses a `C x 2H x 2W` low-level map with a `C x H x W` high-level map.
pub fn faafusion<T: Scalar>(
    low: &FeatureMap<T>,
    high: &FeatureMap<T>,
    cfg: &FusionConfig<T>,
) -> Result<FusionOutput<T>> {
    let (c, h2, w2) = low.shape();
    let (ch, h, w) = high.shape();
    if c != ch || h2 != 2 * h || w2 != 2 * w {
        return Err(FaaError::Shape(format!(
            "low {:?} must be exactly twice high {:?} spatially with equal channels",
            low.shape(),
            high.shape()
        )));
    }
    cfg.validate(c)?;

    let upsampled = upsample2x(high);
    let high_patches = unfold(&project_channels(&upsampled, &cfg.proj_high)?, &cfg.patch)?;
    let low_patches = unfold(&project_channels(low, &cfg.proj_low)?, &cfg.patch)?;

    let results: Vec<PatchResult<T>> = low_patches
        .patches
        .par_iter()
        .zip(high_patches.patches.par_iter())
        .map(|(l, hp)| align_patch(&l.data, &hp.data, &cfg.fae))
        .collect::<Result<_>>()?;

    let mut low_estimates = Vec::with_capacity(results.len());
    let mut high_estimates = Vec::with_capacity(results.len());
    let mut rotations = Vec::with_capacity(results.len());
    let mut rotated = PatchSet {
        rows: high_patches.rows,
        cols: high_patches.cols,
        patches: high_patches.patches,
    };
    for (slot, r) in rotated.patches.iter_mut().zip(results) {
        slot.data = r.patch;
        low_estimates.push(r.low);
        high_estimates.push(r.high);
        rotations.push(r.rotation);
    }

    let folded = fold(&rotated, &cfg.patch, (cfg.c_mid, h2, w2))?;
    let reconstructed = project_channels(&folded, &cfg.proj_out)?;
    let fused = low.add(&upsampled)?.add(&reconstructed)?;
    Ok(FusionOutput {
        fused,
        upsampled,
        reconstructed,
        low_estimates,
        high_estimates,
        rotations,
    })
}
