//! Fourier angle estimation and alignment for 2D feature grids.
//!
//! The estimator reads the dominant direction of a grid off its centered
//! power spectrum ([`fae`]); [`faa_align`] rotates the grid so that
//! direction lands on a reference angle. Two consumers build on it:
//! [`faafusion`], an orientation-aligned lateral merge between two pyramid
//! levels, and the RoI head transform in [`head`].
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common choices.

pub mod error;
pub mod fusion;
pub mod geometry;
pub mod grid;
pub mod head;
pub mod interp;
pub mod io;
pub mod scalar;
pub mod spectral;
pub mod synth;

pub use error::{FaaError, Result};
pub use fusion::{faafusion, project_channels, FusionConfig, FusionOutput, ProjectionSpec};
pub use geometry::{
    faa_align, fold, fold_counts, rotate, unfold, upsample2x, Patch, PatchSet, PatchSpec,
    RotationSpec,
};
pub use grid::{FeatureMap, Grid, Matrix, Spectrum};
pub use head::{
    faa_head_align, faa_head_features, head_forward, HeadConfig, HeadOutput, LinearWeights,
};
pub use scalar::Scalar;
pub use spectral::{
    angular_energy, center_spectrum, centered_dft2, dft2, estimate_angle, fae, polar_resample,
    power_spectrum, AngleEstimate, FaeConfig, PolarEnergy, PowerSpectrum, Window,
};
pub use synth::{
    bench_angle_sweep, bench_equivariance, dirichlet_rect_spectrum, make_rectangle, ncc,
    ncc_half_turn, oracle_angle_dense, BenchReport, EquivarianceReport, RectSpec, SweepOptions,
};

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type FeatureMap64 = FeatureMap<f64>;
pub type FeatureMap32 = FeatureMap<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type AngleEstimate64 = AngleEstimate<f64>;
pub type AngleEstimate32 = AngleEstimate<f32>;
pub type FusionConfig64 = FusionConfig<f64>;
pub type HeadConfig64 = HeadConfig<f64>;
