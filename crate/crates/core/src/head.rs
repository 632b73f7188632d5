//! RoI head transform: align each RoI to the 0 rad canonical pose, add the
//! original back as a residual, then run two shared affine layers followed
//! by the classification and box-regression branches.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FaaError, Result};
use crate::geometry::{rotate_unchecked, RotationSpec};
use crate::grid::{FeatureMap, Matrix};
use crate::io::{matrix_from_csv, matrix_to_csv, vector_from_csv, vector_to_csv};
use crate::scalar::Scalar;
use crate::spectral::{fae, AngleEstimate, FaeConfig};

/// Box deltas per class: `(dx, dy, dw, dh, dtheta)`.
pub const BOX_PARAMS: usize = 5;

/// Affine maps of the head: flatten -> d1 -> d2 -> {classes, 5 * classes}.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearWeights<T> {
    pub w1: Matrix<T>,
    pub b1: Vec<T>,
    pub w2: Matrix<T>,
    pub b2: Vec<T>,
    pub w_cls: Matrix<T>,
    pub b_cls: Vec<T>,
    pub w_reg: Matrix<T>,
    pub b_reg: Vec<T>,
}

const BUNDLE_KEYS: [&str; 8] = ["w1", "b1", "w2", "b2", "w_cls", "b_cls", "w_reg", "b_reg"];

impl<T: Scalar> LinearWeights<T> {
    /// Uniform weights in `±1/sqrt(fan_in)` and zero biases from a fixed seed.
    pub fn seeded(input: usize, d1: usize, d2: usize, num_classes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layer = |rows: usize, cols: usize| {
            let bound = 1.0 / (cols as f64).sqrt();
            Matrix::from_fn(rows, cols, |_, _| T::of(rng.random_range(-bound..bound)))
        };
        LinearWeights {
            w1: layer(d1, input),
            b1: vec![T::zero(); d1],
            w2: layer(d2, d1),
            b2: vec![T::zero(); d2],
            w_cls: layer(num_classes, d2),
            b_cls: vec![T::zero(); num_classes],
            w_reg: layer(BOX_PARAMS * num_classes, d2),
            b_reg: vec![T::zero(); BOX_PARAMS * num_classes],
        }
    }

    pub fn validate(
        &self,
        input: usize,
        fc_dims: (usize, usize),
        num_classes: usize,
    ) -> Result<()> {
        let (d1, d2) = fc_dims;
        let checks = [
            ("w1", (self.w1.rows(), self.w1.cols()), (d1, input)),
            ("w2", (self.w2.rows(), self.w2.cols()), (d2, d1)),
            (
                "w_cls",
                (self.w_cls.rows(), self.w_cls.cols()),
                (num_classes, d2),
            ),
            (
                "w_reg",
                (self.w_reg.rows(), self.w_reg.cols()),
                (BOX_PARAMS * num_classes, d2),
            ),
            ("b1", (self.b1.len(), 1), (d1, 1)),
            ("b2", (self.b2.len(), 1), (d2, 1)),
            ("b_cls", (self.b_cls.len(), 1), (num_classes, 1)),
            (
                "b_reg",
                (self.b_reg.len(), 1),
                (BOX_PARAMS * num_classes, 1),
            ),
        ];
        for (name, got, want) in checks {
            if got != want {
                return Err(FaaError::Shape(format!(
                    "{name} is {}x{}, expected {}x{}",
                    got.0, got.1, want.0, want.1
                )));
            }
        }
        Ok(())
    }

    /// Loads a bundle described by a manifest of `key=path` lines; relative
    /// paths resolve against the manifest's directory.
    pub fn load_bundle(manifest: impl AsRef<Path>) -> Result<Self> {
        let manifest = manifest.as_ref();
        let text = fs::read_to_string(manifest).map_err(|e| FaaError::io(manifest, e))?;
        let base = manifest.parent().unwrap_or(Path::new("."));
        let mut paths: [Option<PathBuf>; 8] = Default::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                FaaError::Config(format!("line {}: expected key=path", lineno + 1))
            })?;
            let idx = BUNDLE_KEYS
                .iter()
                .position(|k| *k == key.trim())
                .ok_or_else(|| {
                    FaaError::Config(format!("line {}: unknown key {:?}", lineno + 1, key.trim()))
                })?;
            paths[idx] = Some(base.join(value.trim()));
        }
        let mut take = |i: usize| {
            paths[i]
                .take()
                .ok_or_else(|| FaaError::Config(format!("manifest is missing {}", BUNDLE_KEYS[i])))
        };
        Ok(LinearWeights {
            w1: matrix_from_csv(take(0)?)?,
            b1: vector_from_csv(take(1)?)?,
            w2: matrix_from_csv(take(2)?)?,
            b2: vector_from_csv(take(3)?)?,
            w_cls: matrix_from_csv(take(4)?)?,
            b_cls: vector_from_csv(take(5)?)?,
            w_reg: matrix_from_csv(take(6)?)?,
            b_reg: vector_from_csv(take(7)?)?,
        })
    }

    /// Writes one CSV per component plus `manifest.txt` into `dir`.
    pub fn save_bundle(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| FaaError::io(dir, e))?;
        matrix_to_csv(&self.w1, dir.join("w1.csv"))?;
        vector_to_csv(&self.b1, dir.join("b1.csv"))?;
        matrix_to_csv(&self.w2, dir.join("w2.csv"))?;
        vector_to_csv(&self.b2, dir.join("b2.csv"))?;
        matrix_to_csv(&self.w_cls, dir.join("w_cls.csv"))?;
        vector_to_csv(&self.b_cls, dir.join("b_cls.csv"))?;
        matrix_to_csv(&self.w_reg, dir.join("w_reg.csv"))?;
        vector_to_csv(&self.b_reg, dir.join("b_reg.csv"))?;
        let manifest = dir.join("manifest.txt");
        let body: String = BUNDLE_KEYS
            .iter()
            .map(|k| format!("{k}={k}.csv\n"))
            .collect();
        fs::write(&manifest, body).map_err(|e| FaaError::io(&manifest, e))?;
        Ok(manifest)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadConfig<T> {
    pub fae: FaeConfig,
    /// Widths of the two shared layers; the first defaults to 1024 + 256.
    pub fc_dims: (usize, usize),
    pub num_classes: usize,
    pub weights: Option<LinearWeights<T>>,
}

impl<T: Scalar> Default for HeadConfig<T> {
    fn default() -> Self {
        HeadConfig {
            fae: FaeConfig::default(),
            fc_dims: (1024 + 256, 1024),
            num_classes: 15,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadOutput<T> {
    pub class_scores: Vec<T>,
    /// `BOX_PARAMS` consecutive entries per class.
    pub box_deltas: Vec<T>,
}

fn check_roi<T: Scalar>(roi: &FeatureMap<T>) -> Result<usize> {
    let (_, h, w) = roi.shape();
    if h != w {
        return Err(FaaError::NonSquare {
            height: h,
            width: w,
        });
    }
    if h < 4 {
        return Err(FaaError::TooSmall { size: h, min: 4 });
    }
    if h % 2 != 0 {
        return Err(FaaError::OddSize(h));
    }
    Ok(h)
}

/// Rotates every channel of `roi` by one shared angle so that the dominant
/// direction of the channel mean lands on 0. Degenerate RoIs pass through.
pub fn faa_head_align<T: Scalar>(
    roi: &FeatureMap<T>,
    cfg: &FaeConfig,
) -> Result<(FeatureMap<T>, AngleEstimate<T>)> {
    check_roi(roi)?;
    let est = fae(&roi.channel_mean(), cfg)?;
    if est.degenerate {
        return Ok((roi.clone(), est));
    }
    let spec = RotationSpec::new(-est.theta_hat);
    let rotated: Vec<_> = roi
        .channel_grids()
        .iter()
        .map(|g| rotate_unchecked(g, &spec))
        .collect();
    Ok((FeatureMap::from_channels(&rotated)?, est))
}

/// Aligned RoI plus the original as a residual.
pub fn faa_head_features<T: Scalar>(
    roi: &FeatureMap<T>,
    cfg: &HeadConfig<T>,
) -> Result<FeatureMap<T>> {
    let (aligned, _) = faa_head_align(roi, &cfg.fae)?;
    aligned.add(roi)
}

fn affine<T: Scalar>(w: &Matrix<T>, b: &[T], x: &[T]) -> Result<Vec<T>> {
    let mut y = w.matvec(x)?;
    for (v, &bias) in y.iter_mut().zip(b) {
        *v = *v + bias;
    }
    Ok(y)
}

pub fn head_forward<T: Scalar>(roi: &FeatureMap<T>, cfg: &HeadConfig<T>) -> Result<HeadOutput<T>> {
    let weights = cfg
        .weights
        .as_ref()
        .ok_or_else(|| FaaError::Config("head weights are missing".into()))?;
    let flat = faa_head_features(roi, cfg)?.into_data();
    weights.validate(flat.len(), cfg.fc_dims, cfg.num_classes)?;

    let hidden: Vec<T> = affine(&weights.w1, &weights.b1, &flat)?
        .into_iter()
        .map(|v| v.max(T::zero()))
        .collect();
    let z = affine(&weights.w2, &weights.b2, &hidden)?;
    Ok(HeadOutput {
        class_scores: affine(&weights.w_cls, &weights.b_cls, &z)?,
        box_deltas: affine(&weights.w_reg, &weights.b_reg, &z)?,
    })
}
