mod common;

use common::*;
use faa_core::synth::band_limited_image;
use faa_core::*;
use rand::Rng;

fn degrees(list: &[f64]) -> Vec<f64> {
    list.iter().map(|d| d.to_radians()).collect()
}

#[test]
fn sweep_tracks_the_perpendicular_direction() {
    let angles: Vec<f64> = (0..36).map(|i| 5.0 * i as f64).collect();
    let report = bench_angle_sweep(
        64,
        20.0,
        6.0,
        &degrees(&angles),
        &FaeConfig::default(),
        &SweepOptions::default(),
    )
    .unwrap();
    assert_eq!(report.rows.len(), 36);
    for (row, phi) in report.rows.iter().zip(&angles) {
        assert!((row.phi_deg - phi).abs() < 1e-9);
    }
    let s = &report.summary;
    assert!(s.median_error_deg.unwrap() <= 2.0);
    assert!(s.max_error_deg.unwrap() <= 5.0);
    assert!(s.max_oracle_error_deg.unwrap() <= 2.0);
    assert!(report.runtime_ms.is_none());

    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 36);
    assert!(json["summary"]["median_error_deg"].is_number());
    assert_eq!(report.to_csv().lines().count(), 37);
}

fn random_rects(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let b = rng.random_range(2.0..6.0);
            let a = rng.random_range(1.5 * b..24.0);
            (a, b, rng.random_range(0.0..180.0))
        })
        .collect()
}

#[test]
fn perpendicular_bin_dominates_the_major_axis_bin() {
    let cfg = FaeConfig::default();
    for (a, b, phi) in random_rects(40, 20) {
        let g = make_rectangle(&RectSpec::new(64, a, b, phi.to_radians())).unwrap();
        let h = fae(&g, &cfg).unwrap().histogram;
        let perp = ((phi + 90.0).round() as usize) % 180;
        let along = (phi.round() as usize) % 180;
        assert!(h[perp] >= 2.0 * h[along], "a {a} b {b} phi {phi}");
    }
}

#[test]
fn small_pose_changes_move_the_estimate_by_the_same_amount() {
    let cfg = FaeConfig::default();
    for phi in [12.0, 47.0, 101.0, 158.0] {
        let base = fae(
            &make_rectangle(&RectSpec::new(64, 20.0, 6.0, f64::to_radians(phi))).unwrap(),
            &cfg,
        )
        .unwrap();
        for delta in [5.0, 10.0] {
            let g = make_rectangle(&RectSpec::new(64, 20.0, 6.0, f64::to_radians(phi + delta)))
                .unwrap();
            let moved = fae(&g, &cfg).unwrap().theta_hat_deg();
            let err = half_turn_dist_deg(moved - base.theta_hat_deg(), delta);
            assert!(err <= 2.0, "phi {phi} delta {delta}: {err}");
        }
    }
}

#[test]
fn oracle_agrees_with_estimator_on_random_rectangles() {
    let cfg = FaeConfig::default();
    for (a, b, phi) in random_rects(41, 20) {
        let g = make_rectangle(&RectSpec::new(64, a, b, phi.to_radians())).unwrap();
        let oracle = oracle_angle_dense(&g, 0.25).unwrap().to_degrees();
        let est = fae(&g, &cfg).unwrap().theta_hat_deg();
        assert!(
            half_turn_dist_deg(oracle, est) <= 2.0,
            "a {a} b {b} phi {phi}: {oracle} vs {est}"
        );
    }
}

#[test]
fn histogram_peak_rotates_with_the_image() {
    let g = band_limited_image::<f64>(64, 3);
    let report = bench_equivariance(
        &g,
        &degrees(&[0.0, 15.0, 30.0, 45.0, 60.0, 90.0]),
        &FaeConfig::default(),
    )
    .unwrap();
    assert_eq!(report.bins, 180);
    assert_eq!(report.rows[0].displacement_bins, 0.0);
    assert_eq!(report.rows[5].displacement_bins, 0.0);
    assert_eq!(
        report.rows[5].rotated_peak_bin,
        (report.rows[5].base_peak_bin + 90) % 180
    );
    assert!(report.max_displacement_bins.unwrap() <= 2.0);
}

#[test]
fn dirichlet_spectrum_is_mirror_symmetric() {
    let d = dirichlet_rect_spectrum::<f64>(32, 5, 2).unwrap();
    for v in 1..32 {
        for u in 1..32 {
            let here = d.get(v, u);
            assert!((here - d.get(v, 32 - u)).abs() <= 1e-9 * here.max(1.0));
            assert!((here - d.get(32 - v, u)).abs() <= 1e-9 * here.max(1.0));
        }
    }
}
