mod common;

use common::*;
use faa_core::synth::band_limited_image;
use faa_core::*;

fn rotate_oracle(g: &Grid<f64>, angle: f64) -> Grid<f64> {
    let (h, w) = g.shape();
    let (cy, cx) = ((h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0);
    let (s, c) = angle.sin_cos();
    Grid::from_fn(h, w, |r, col| {
        let (dx, dy) = (col as f64 - cx, r as f64 - cy);
        bilinear(g.data(), h, w, cx + c * dx + s * dy, cy + c * dy - s * dx)
    })
}

#[test]
fn rotation_matches_per_pixel_oracle() {
    let mut rng = rng(10);
    for angle in [0.3, -1.2, 2.5] {
        let g = random_grid(&mut rng, 12, 12);
        let got = rotate(&g, &RotationSpec::new(angle)).unwrap();
        assert!(got.max_abs_diff(&rotate_oracle(&g, angle)) < 1e-12);
    }
}

#[test]
fn quarter_turn_is_transpose_and_flip() {
    let g = random_grid(&mut rng(11), 6, 6);
    let q = rotate(&g, &RotationSpec::new(std::f64::consts::FRAC_PI_2)).unwrap();
    for r in 0..6 {
        for c in 0..6 {
            assert_eq!(q.get(r, c), g.get(5 - c, r));
        }
    }
}

/// Low-frequency gratings (at most 0.05 cycles per pixel) under a Gaussian envelope.
fn smooth_image() -> Grid<f64> {
    Grid::from_fn(64, 64, |r, c| {
        let (x, y) = (c as f64 - 31.5, r as f64 - 31.5);
        let env = (-(x * x + y * y) / (2.0 * 14.0 * 14.0)).exp();
        let tau = std::f64::consts::TAU;
        env * ((tau * 0.05 * (0.8 * x + 0.6 * y)).cos()
            + 0.5 * (tau * 0.03 * (y - 0.3 * x) + 1.0).sin())
    })
}

#[test]
fn rotation_round_trip_on_smooth_image() {
    let g = smooth_image();
    let a = 30f64.to_radians();
    let back = rotate(
        &rotate(&g, &RotationSpec::new(a)).unwrap(),
        &RotationSpec::new(-a),
    )
    .unwrap();
    let err = max_diff_on(&g, &back, &disk(64, 64, 30.0));
    assert!(err < 0.05, "{err}");
}

#[test]
fn rotating_a_bar_turns_its_spectrum_the_same_way() {
    let cfg = FaeConfig::default();
    let g = make_rectangle(&RectSpec::new(64, 20.0, 6.0, 0.0)).unwrap();
    for deg in [20.0f64, 50.0, 110.0] {
        let r = rotate(&g, &RotationSpec::new(deg.to_radians())).unwrap();
        let got = fae(&r, &cfg).unwrap().theta_hat_deg();
        assert!(half_turn_dist_deg(got, 90.0 + deg) <= 2.0, "{deg}: {got}");
    }
}

#[test]
fn aligning_an_aligned_grid_is_nearly_a_noop() {
    let cfg = FaeConfig::default();
    let g = band_limited_image::<f64>(64, 3);
    let theta0 = 0.4;
    let (once, _) = faa_align(&g, theta0, &cfg).unwrap();
    let (twice, est) = faa_align(&once, theta0, &cfg).unwrap();
    assert!((est.theta_hat - theta0).abs() <= cfg.bin_width());
    let err = max_diff_on(&once, &twice, &disk(64, 64, 30.0));
    assert!(err < 0.05, "{err}");
}

#[test]
fn horizontal_bar_aligned_to_zero() {
    let cfg = FaeConfig::default();
    let g = make_rectangle(&RectSpec::new(64, 20.0, 6.0, 0.0)).unwrap();
    let (out, est) = faa_align(&g, 0.0, &cfg).unwrap();
    assert!(half_turn_dist_deg(est.theta_hat_deg(), 90.0) <= 2.0);
    let again = fae(&out, &cfg).unwrap().theta_hat_deg();
    assert!(half_turn_dist_deg(again, 0.0) <= 2.0, "{again}");
}

#[test]
fn upsample_matches_closed_form() {
    let f: FeatureMap<f64> = FeatureMap::new(1, 2, 2, vec![1.0, 2.0, 3.0, 5.0]).unwrap();
    let up = upsample2x(&f);
    assert_eq!(up.shape(), (1, 4, 4));
    let p = [0.0, 0.25, 0.75, 1.0];
    for r in 0..4 {
        for c in 0..4 {
            let (fy, fx) = (p[r], p[c]);
            let want =
                (1.0 - fy) * ((1.0 - fx) * 1.0 + fx * 2.0) + fy * ((1.0 - fx) * 3.0 + fx * 5.0);
            assert!((up.get(0, r, c) - want).abs() < 1e-12);
        }
    }
    let multi = upsample2x(&random_map(&mut rng(12), 3, 4, 6));
    assert_eq!(multi.shape(), (3, 8, 12));
}

#[test]
fn tiled_round_trip_is_exact() {
    let f = random_map(&mut rng(13), 2, 16, 16);
    for k in [2, 4, 8, 16] {
        let spec = PatchSpec::tiled(k);
        let back = fold(&unfold(&f, &spec).unwrap(), &spec, f.shape()).unwrap();
        assert_eq!(back, f);
    }
}

#[test]
fn dense_round_trip_and_patch_count() {
    let f = random_map(&mut rng(14), 1, 16, 16);
    for k in [3, 4, 8] {
        let spec = PatchSpec::dense(k);
        let set = unfold(&f, &spec).unwrap();
        assert_eq!(set.len(), 16 * 16);
        let back = fold(&set, &spec, f.shape()).unwrap();
        assert!(back.max_abs_diff(&f) <= 1e-12, "k = {k}");
    }
}

#[test]
fn raw_fold_of_ones_counts_contributions() {
    let spec = PatchSpec::dense(3);
    let counts = fold_counts::<f64>(&spec, 5, 5).unwrap();
    // interior pixels are covered by all nine placements, corners by four
    assert_eq!(counts.get(0, 2, 2), 9.0);
    assert_eq!(counts.get(0, 0, 0), 4.0);
    assert_eq!(counts.get(0, 0, 2), 6.0);
    let tiled = fold_counts::<f64>(&PatchSpec::tiled(4), 8, 8).unwrap();
    assert!(tiled.data().iter().all(|&v| v == 1.0));
}
