//! Fourier angle estimation.
//!
//! The chain is: optional window, spectrum centering by `(-1)^(x+y)`
//! pre-multiplication, 2D DFT, power spectrum, polar resampling on
//! `u = H/2 + rho cos(theta)`, `v = H/2 + rho sin(theta)` (u = column,
//! v = row), radially weighted angular energy folded onto `[0, pi)`, and a
//! smallest-index argmax.
//!
//! Angles are measured counterclockwise from the +x (column) axis toward +y
//! (row). A rectangle whose major axis points at `phi` concentrates its
//! spectral energy at `phi + pi/2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{FaaError, Result};
use crate::grid::{Grid, Spectrum};
use crate::interp::bilinear_or_zero;
use crate::scalar::Scalar;

/// Spatial taper applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    None,
    /// Separable Hann taper; the grid mean is removed first so a flat patch
    /// stays flat.
    Hann,
}

impl FromStr for Window {
    type Err = FaaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Window::None),
            "hann" => Ok(Window::Hann),
            other => Err(FaaError::Config(format!(
                "unknown window {other:?} (expected none or hann)"
            ))),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::None => "none",
            Window::Hann => "hann",
        })
    }
}

/// Discretization of the angle estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaeConfig {
    /// Angular samples over the full turn `[0, 2pi)`; folded to half as many.
    pub n_theta: usize,
    /// Radial samples; `None` means one per pixel of radius, `H/2 - 1`.
    pub n_rho: Option<usize>,
    /// Relative energy threshold below which the estimate is degenerate.
    pub energy_floor: f64,
    pub window: Window,
}

impl Default for FaeConfig {
    fn default() -> Self {
        FaeConfig {
            n_theta: 360,
            n_rho: None,
            energy_floor: 1e-8,
            window: Window::None,
        }
    }
}

impl FaeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 4 {
            return Err(FaaError::Config(format!(
                "n_theta must be at least 4, got {}",
                self.n_theta
            )));
        }
        if self.n_rho == Some(0) {
            return Err(FaaError::Config("n_rho must be positive".into()));
        }
        if !(self.energy_floor >= 0.0 && self.energy_floor.is_finite()) {
            return Err(FaaError::Config(format!(
                "energy_floor must be finite and non-negative, got {}",
                self.energy_floor
            )));
        }
        Ok(())
    }

    /// Width of one folded histogram bin, in radians.
    pub fn bin_width(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_theta as f64
    }
}

/// Angular extent covered by the θ axis of a [`PolarEnergy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaSpan {
    HalfTurn,
    FullTurn,
}

impl ThetaSpan {
    fn radians<T: Scalar>(self) -> T {
        match self {
            ThetaSpan::HalfTurn => T::PI(),
            ThetaSpan::FullTurn => T::TAU(),
        }
    }
}

/// Power-spectrum samples on a polar lattice, indexed `(rho, theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarEnergy<T> {
    n_rho: usize,
    n_theta: usize,
    rho_max: T,
    span: ThetaSpan,
    data: Vec<T>,
}

impl<T: Scalar> PolarEnergy<T> {
    pub fn new(
        n_rho: usize,
        n_theta: usize,
        rho_max: T,
        span: ThetaSpan,
        data: Vec<T>,
    ) -> Result<Self> {
        if n_rho == 0 || n_theta == 0 || data.len() != n_rho * n_theta {
            return Err(FaaError::Shape(format!(
                "polar energy {n_rho}x{n_theta} needs {} values, got {}",
                n_rho * n_theta,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| v.is_nan() || *v < T::zero()) {
            return Err(FaaError::Shape(format!(
                "polar energy entry {i} is negative or NaN"
            )));
        }
        Ok(PolarEnergy {
            n_rho,
            n_theta,
            rho_max,
            span,
            data,
        })
    }

    pub fn n_rho(&self) -> usize {
        self.n_rho
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn rho_max(&self) -> T {
        self.rho_max
    }

    pub fn span(&self) -> ThetaSpan {
        self.span
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Radius of ρ-index `i`: `(i + 1) * rho_max / n_rho`.
    pub fn radius(&self, i: usize) -> T {
        T::of_usize(i + 1) * self.rho_max / T::of_usize(self.n_rho)
    }

    /// Angle of θ-index `j`: `j * span / n_theta`.
    pub fn angle(&self, j: usize) -> T {
        T::of_usize(j) * self.span.radians::<T>() / T::of_usize(self.n_theta)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n_theta + j]
    }

    /// Rows are radii, columns are angles.
    pub fn to_grid(&self) -> Grid<T> {
        Grid::new(self.n_rho, self.n_theta, self.data.clone())
            .expect("polar energy dimensions are positive")
    }
}

/// Squared magnitudes of a spectrum, tagged with its centering.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum<T> {
    pub grid: Grid<T>,
    pub centered: bool,
}

impl<T: Scalar> PowerSpectrum<T> {
    /// Wraps a grid already laid out with zero frequency at the center.
    pub fn centered(grid: Grid<T>) -> Self {
        PowerSpectrum {
            grid,
            centered: true,
        }
    }

    pub fn total(&self) -> T {
        self.grid.sum()
    }
}

/// Result of the angle estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleEstimate<T> {
    /// Dominant spectral direction in `[0, pi)`.
    pub theta_hat: T,
    /// Folded angular energy, one entry per bin over `[0, pi)`.
    pub histogram: Vec<T>,
    /// Set when the histogram mass fell under the energy floor; `theta_hat` is 0.
    pub degenerate: bool,
    pub total_energy: T,
}

impl<T: Scalar> AngleEstimate<T> {
    pub fn bin_width(&self) -> T {
        T::PI() / T::of_usize(self.histogram.len())
    }

    /// Index of the reported bin, `None` when degenerate.
    pub fn peak_bin(&self) -> Option<usize> {
        (!self.degenerate).then(|| {
            (self.theta_hat / self.bin_width())
                .round()
                .to_usize()
                .unwrap_or(0)
        })
    }

    pub fn theta_hat_deg(&self) -> f64 {
        self.theta_hat.to_f64_lossy().to_degrees()
    }
}

fn fft_rows<T: Scalar>(data: &mut [Complex<T>], size: usize, planner: &mut FftPlanner<T>) {
    let fft = planner.plan_fft_forward(size);
    fft.process(data);
}

/// 2D discrete Fourier transform of a square grid,
/// `F(u, v) = sum g(y, x) exp(-2 pi i (u x + v y) / H)`, stored at `(v, u)`.
pub fn dft2<T: Scalar>(g: &Grid<T>) -> Result<Spectrum<T>> {
    let n = g.square_size()?;
    g.ensure_finite()?;
    let mut planner = FftPlanner::new();
    let mut data: Vec<Complex<T>> = g
        .data()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();

    // rows: rustfft transforms consecutive chunks of length n
    fft_rows(&mut data, n, &mut planner);

    let mut col = vec![Complex::new(T::zero(), T::zero()); n * n];
    for r in 0..n {
        for c in 0..n {
            col[c * n + r] = data[r * n + c];
        }
    }
    fft_rows(&mut col, n, &mut planner);
    for r in 0..n {
        for c in 0..n {
            data[r * n + c] = col[c * n + r];
        }
    }
    Spectrum::new(n, data, false)
}

/// Multiplies by `(-1)^(x+y)` so that the transform has its zero frequency at
/// `(H/2, H/2)` for even `H`.
pub fn center_spectrum<T: Scalar>(g: &Grid<T>) -> Grid<T> {
    Grid::from_fn(g.height(), g.width(), |r, c| {
        let v = g.get(r, c);
        if (r + c) % 2 == 0 {
            v
        } else {
            -v
        }
    })
}

/// `dft2(center_spectrum(g))`, flagged as centered.
pub fn centered_dft2<T: Scalar>(g: &Grid<T>) -> Result<Spectrum<T>> {
    Ok(dft2(&center_spectrum(g))?.with_centered(true))
}

pub fn power_spectrum<T: Scalar>(s: &Spectrum<T>) -> PowerSpectrum<T> {
    let n = s.size();
    let grid = Grid::new(n, n, s.data().iter().map(|z| z.norm_sqr()).collect())
        .expect("spectrum is square and non-empty");
    PowerSpectrum {
        grid,
        centered: s.is_centered(),
    }
}

/// Largest sampled radius for a grid of side `size`.
pub fn rho_max_for(size: usize) -> usize {
    (size / 2).saturating_sub(1)
}

/// Samples a centered power spectrum on the polar lattice over `[0, 2pi)`.
///
/// The zero-frequency pixel at `(H/2, H/2)` reads as zero, so the DC term
/// never leaks into neighbouring samples through interpolation.
pub fn polar_resample<T: Scalar>(p: &PowerSpectrum<T>, cfg: &FaeConfig) -> Result<PolarEnergy<T>> {
    cfg.validate()?;
    let n = p.grid.square_size()?;
    if !p.centered {
        return Err(FaaError::Shape(
            "polar resampling needs a centered power spectrum".into(),
        ));
    }
    let rho_max = rho_max_for(n);
    if rho_max == 0 {
        return Err(FaaError::TooSmall { size: n, min: 4 });
    }
    let n_rho = cfg.n_rho.unwrap_or(rho_max);
    let n_theta = cfg.n_theta;

    let half = n / 2;
    let mut power = p.grid.clone().into_data();
    power[half * n + half] = T::zero();
    let power = Grid::new(n, n, power)?;

    let mut out = PolarEnergy {
        n_rho,
        n_theta,
        rho_max: T::of_usize(rho_max),
        span: ThetaSpan::FullTurn,
        data: vec![T::zero(); n_rho * n_theta],
    };
    let center = T::of_usize(half);
    let trig: Vec<(T, T)> = (0..n_theta)
        .map(|j| {
            let t = out.angle(j);
            (t.cos(), t.sin())
        })
        .collect();
    for i in 0..n_rho {
        let rho = out.radius(i);
        for (j, &(cos, sin)) in trig.iter().enumerate() {
            let u = center + rho * cos;
            let v = center + rho * sin;
            out.data[i * n_theta + j] = bilinear_or_zero(&power, u, v);
        }
    }
    Ok(out)
}

/// Radially weighted angular energy `h(theta) = sum_rho rho E(rho, theta)`,
/// folded onto `[0, pi)` when the input covers the full turn.
pub fn angular_energy<T: Scalar>(pe: &PolarEnergy<T>) -> Result<Vec<T>> {
    let n_theta = pe.n_theta();
    let mut h = vec![T::zero(); n_theta];
    for i in 0..pe.n_rho() {
        let rho = pe.radius(i);
        for (j, acc) in h.iter_mut().enumerate() {
            *acc = *acc + rho * pe.get(i, j);
        }
    }
    match pe.span() {
        ThetaSpan::HalfTurn => Ok(h),
        ThetaSpan::FullTurn => {
            if !n_theta.is_multiple_of(2) {
                return Err(FaaError::Config(format!(
                    "folding needs an even n_theta, got {n_theta}"
                )));
            }
            let half = n_theta / 2;
            Ok((0..half).map(|j| h[j] + h[j + half]).collect())
        }
    }
}

/// Picks the dominant direction from a folded histogram over `[0, pi)`.
///
/// Bin `j` is centered on `j * pi / len`. Ties resolve to the smallest
/// index. When the histogram mass is at most
/// `energy_floor * max(total_energy, eps)` the estimate is degenerate and
/// `theta_hat` is 0.
pub fn estimate_angle<T: Scalar>(
    h: &[T],
    cfg: &FaeConfig,
    total_energy: T,
) -> Result<AngleEstimate<T>> {
    if h.len() < 2 {
        return Err(FaaError::Shape(format!(
            "histogram needs at least 2 bins, got {}",
            h.len()
        )));
    }
    let mass: T = h.iter().copied().sum();
    let floor = T::of(cfg.energy_floor) * total_energy.max(T::epsilon());
    let degenerate = mass.is_nan() || mass <= floor;

    let theta_hat = if degenerate {
        T::zero()
    } else {
        let mut best = 0;
        for (j, &v) in h.iter().enumerate().skip(1) {
            if v > h[best] {
                best = j;
            }
        }
        T::of_usize(best) * T::PI() / T::of_usize(h.len())
    };
    Ok(AngleEstimate {
        theta_hat,
        histogram: h.to_vec(),
        degenerate,
        total_energy,
    })
}

fn hann<T: Scalar>(n: usize) -> Vec<T> {
    if n == 1 {
        return vec![T::one()];
    }
    let denom = T::of_usize(n - 1);
    let half = T::of(0.5);
    (0..n)
        .map(|i| half - half * (T::TAU() * T::of_usize(i) / denom).cos())
        .collect()
}

/// Applies the configured window; identity for [`Window::None`].
pub fn apply_window<T: Scalar>(g: &Grid<T>, window: Window) -> Grid<T> {
    match window {
        Window::None => g.clone(),
        Window::Hann => {
            let mean = g.mean();
            let wy = hann::<T>(g.height());
            let wx = hann::<T>(g.width());
            Grid::from_fn(g.height(), g.width(), |r, c| {
                (g.get(r, c) - mean) * wy[r] * wx[c]
            })
        }
    }
}

fn check_fae_input<T: Scalar>(g: &Grid<T>) -> Result<usize> {
    let n = g.square_size()?;
    if n < 4 {
        return Err(FaaError::TooSmall { size: n, min: 4 });
    }
    if n % 2 != 0 {
        return Err(FaaError::OddSize(n));
    }
    g.ensure_finite()?;
    Ok(n)
}

/// Centered power spectrum of the (windowed) input, as used by [`fae`].
pub fn fae_power<T: Scalar>(g: &Grid<T>, cfg: &FaeConfig) -> Result<PowerSpectrum<T>> {
    check_fae_input(g)?;
    cfg.validate()?;
    let windowed = apply_window(g, cfg.window);
    Ok(power_spectrum(&centered_dft2(&windowed)?))
}

/// Estimates the dominant spectral orientation of a square, even-sized grid.
pub fn fae<T: Scalar>(g: &Grid<T>, cfg: &FaeConfig) -> Result<AngleEstimate<T>> {
    let power = fae_power(g, cfg)?;
    let polar = polar_resample(&power, cfg)?;
    let h = angular_energy(&polar)?;
    estimate_angle(&h, cfg, power.total())
}
