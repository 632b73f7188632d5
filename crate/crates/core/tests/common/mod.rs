//! Reference implementations shared by the integration tests. Each one is
//! written directly from the defining formula and shares no code with the
//! library.
#![allow(dead_code)]

use faa_core::{FeatureMap, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_grid(rng: &mut ChaCha8Rng, h: usize, w: usize) -> Grid<f64> {
    Grid::from_fn(h, w, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_map(rng: &mut ChaCha8Rng, c: usize, h: usize, w: usize) -> FeatureMap<f64> {
    FeatureMap::from_fn(c, h, w, |_, _, _| rng.random_range(-1.0..1.0))
}

/// `F(u, v) = sum_y sum_x g(y, x) exp(-2 pi i (u x + v y) / H)` by four nested loops,
/// returned as `(re, im)` at row `v`, column `u`.
pub fn naive_dft(g: &Grid<f64>) -> Vec<(f64, f64)> {
    let n = g.height();
    let mut out = vec![(0.0, 0.0); n * n];
    for v in 0..n {
        for u in 0..n {
            let (mut re, mut im) = (0.0, 0.0);
            for y in 0..n {
                for x in 0..n {
                    let ang = -TAU * ((u * x + v * y) % n) as f64 / n as f64;
                    re += g.get(y, x) * ang.cos();
                    im += g.get(y, x) * ang.sin();
                }
            }
            out[v * n + u] = (re, im);
        }
    }
    out
}

/// Bilinear interpolation on a row-major array; zero outside the sample hull.
pub fn bilinear(data: &[f64], h: usize, w: usize, x: f64, y: f64) -> f64 {
    if !(x >= 0.0 && y >= 0.0 && x <= (w - 1) as f64 && y <= (h - 1) as f64) {
        return 0.0;
    }
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let at = |r: usize, c: usize| data[r * w + c];
    (1.0 - fy) * ((1.0 - fx) * at(y0, x0) + fx * at(y0, x1))
        + fy * ((1.0 - fx) * at(y1, x0) + fx * at(y1, x1))
}

/// Pixels within `radius` of the grid center.
pub fn disk(h: usize, w: usize, radius: f64) -> Vec<(usize, usize)> {
    let (cy, cx) = ((h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0);
    let mut out = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if (r as f64 - cy).powi(2) + (c as f64 - cx).powi(2) <= radius * radius {
                out.push((r, c));
            }
        }
    }
    out
}

pub fn max_diff_on(a: &Grid<f64>, b: &Grid<f64>, pixels: &[(usize, usize)]) -> f64 {
    pixels
        .iter()
        .map(|&(r, c)| (a.get(r, c) - b.get(r, c)).abs())
        .fold(0.0, f64::max)
}

/// Circular distance between two angles modulo a half turn, in degrees.
pub fn half_turn_dist_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}
