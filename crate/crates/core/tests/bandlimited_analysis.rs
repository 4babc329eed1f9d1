mod common;

use std::f64::consts::PI;

use cardspline::bandlimited_analysis::{error_report, sup_error_with};
use cardspline::quadrature::CompositeGauss;
use cardspline::{
    aliasing_envelope, build_fundamental, fundamental_hat, l2_error_bound, l2_error_spectral, sample_integers,
    sup_error_bound, target_gallery, BandlimitedTarget, ErrorReport, SplineError, SplineParams, TargetKind,
};
use common::sinc_l2_error_time_domain;
use proptest::prelude::*;

fn params(alpha: f64, k: usize) -> SplineParams {
    SplineParams::new(alpha, k).unwrap()
}

/// `||g - I_k g||^2` straight from `L-hat`: the in-band factor
/// `|1 - sqrt(2 pi) L-hat|^2` plus every alias `|sqrt(2 pi) L-hat(xi - 2 pi l)|^2`.
fn l2_error_from_transform(p: SplineParams, target: &BandlimitedTarget) -> f64 {
    let root = (2.0 * PI).sqrt();
    let weight = |xi: f64| {
        let centre = 1.0 - root * fundamental_hat(p, xi, 1e-14).unwrap();
        let mut s = centre * centre;
        for l in 1..=400 {
            let shift = 2.0 * PI * l as f64;
            let a = root * fundamental_hat(p, xi - shift, 1e-14).unwrap();
            let b = root * fundamental_hat(p, xi + shift, 1e-14).unwrap();
            s += a * a + b * b;
        }
        s
    };
    let rule = CompositeGauss::new(16);
    let v = rule.integrate_pieces(&[0.0, PI / 2.0, PI], 24, |xi| target.spectrum(xi).powi(2) * weight(xi));
    (2.0 * v).sqrt()
}

#[test]
fn sinc_error_matches_time_domain() {
    let sinc = target_gallery("sinc").unwrap();
    for &alpha in &[0.5, 1.0, 2.0] {
        for k in [1, 2, 3, 6] {
            let spectral = l2_error_spectral(params(alpha, k), &sinc, 1e-12).unwrap();
            let time = sinc_l2_error_time_domain(&build_fundamental(params(alpha, k), 1e-12).unwrap());
            assert!((spectral - time).abs() < 1e-5 * time, "alpha={alpha} k={k}: {spectral} vs {time}");
        }
    }
}

#[test]
fn error_matches_direct_transform_sum() {
    for kind in [TargetKind::TriangleSpectrum, TargetKind::BumpSpectrum, TargetKind::HalfBand] {
        let t = BandlimitedTarget::new(kind);
        for k in [2, 4] {
            let p = params(1.0, k);
            let (fast, direct) = (l2_error_spectral(p, &t, 1e-11).unwrap(), l2_error_from_transform(p, &t));
            assert!((fast - direct).abs() < 1e-6 * direct, "{kind} k={k}: {fast} vs {direct}");
        }
    }
}

#[test]
fn errors_shrink_with_order() {
    for kind in TargetKind::GALLERY {
        let t = BandlimitedTarget::new(kind);
        let errs: Vec<f64> = (1..=6).map(|k| l2_error_spectral(params(1.0, k), &t, 1e-10).unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{kind}: {errs:?}");
    }
}

#[test]
fn sup_error_stays_under_its_spectral_bound() {
    for kind in TargetKind::GALLERY {
        let t = BandlimitedTarget::new(kind);
        for k in [1, 3, 6] {
            let p = params(1.0, k);
            let l = build_fundamental(p, 1e-12).unwrap();
            let grid = sup_error_with(&l, &t, 5.0, 101).unwrap();
            let bound = sup_error_bound(p, &t, 1e-10).unwrap();
            assert!(grid <= bound * (1.0 + 1e-9), "{kind} k={k}: {grid} > {bound}");
        }
    }
}

#[test]
fn envelope_dominates_sampled_aliases() {
    for &alpha in &[0.5, 2.0] {
        for k in 1..=4 {
            let p = params(alpha, k);
            for l in [-3i64, -1, 1, 2, 5] {
                let env = aliasing_envelope(p, l).unwrap();
                for i in 0..=64 {
                    let xi = -PI + 2.0 * PI * i as f64 / 64.0;
                    let v = fundamental_hat(p, xi - 2.0 * PI * l as f64, 1e-14).unwrap().abs();
                    assert!(v <= env + 1e-12);
                }
            }
        }
    }
}

#[test]
fn half_band_tail_matches_direct_summation() {
    let t = BandlimitedTarget::new(TargetKind::HalfBand);
    for j_max in [4usize, 25] {
        let s = sample_integers(&t, j_max);
        let direct: f64 = ((j_max as i64 + 1)..2_000_000).map(|j| 2.0 * t.eval(j as f64).powi(2)).sum();
        // the direct sum stops at 2e6; its own remainder is 1 / (pi^2 2e6)
        let direct = direct + 1.0 / (PI * PI * 2e6);
        assert!((s.tail_l2.powi(2) - direct).abs() < 1e-12, "J={j_max}");
    }
}

#[test]
fn report_has_fixed_columns() {
    let t = target_gallery("bump-spectrum").unwrap();
    let r = error_report(params(1.0, 3), &t, 1e-10, 5.0, 21).unwrap();
    assert!(r.l2_bound >= r.l2_error && r.quad_res > 0 && r.ell_trunc > 0);
    let row = r.csv_row();
    assert_eq!(row.split(',').count(), ErrorReport::CSV_HEADER.split(',').count());
    assert!(row.starts_with("1.000000000e+00,3,bump-spectrum,"));
    assert!(matches!(target_gallery("box"), Err(SplineError::UnknownTarget(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bound_is_within_sqrt_two(alpha in 0.3f64..3.0, k in 1usize..9, which in 0usize..4) {
        let t = BandlimitedTarget::new(TargetKind::GALLERY[which]);
        let p = params(alpha, k);
        let e = l2_error_spectral(p, &t, 1e-10).unwrap();
        let b = l2_error_bound(p, &t, 1e-10).unwrap();
        prop_assert!(b >= e * (1.0 - 1e-9));
        prop_assert!(b <= 2f64.sqrt() * e * (1.0 + 1e-9));
    }
}
