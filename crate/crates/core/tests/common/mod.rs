#![allow(dead_code)]

use std::f64::consts::PI;

use cardspline::quadrature::CompositeGauss;
use cardspline::FundamentalFunction;

/// `\int_a^b f` with a 16-point Gauss rule on every unit interval.
pub fn integrate_unit_pieces<F: FnMut(f64) -> f64>(a: i64, b: i64, panels: usize, f: F) -> f64 {
    let breaks: Vec<f64> = (a..=b).map(|j| j as f64).collect();
    CompositeGauss::new(16).integrate_pieces(&breaks, panels, f)
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `||sinc - L_k||_{L^2}` from the time domain: quadrature on `|x| <= 60`
/// plus the asymptotic `sinc^2` tail beyond.
pub fn sinc_l2_error_time_domain(l: &FundamentalFunction) -> f64 {
    const X: i64 = 60;
    let body = integrate_unit_pieces(-X, X, 2, |x| (sinc(x) - l.eval(x)).powi(2));
    let xf = X as f64;
    let tail = 1.0 / (PI * PI * xf) - 1.0 / (2.0 * PI.powi(4) * xf.powi(3));
    (body + tail).sqrt()
}

/// Radius beyond which `|L_k|` is below `1e-17` of its peak.
pub fn negligible_radius(l: &FundamentalFunction) -> i64 {
    match l.decay_rate() {
        Some(c) => (40.0 / c).ceil() as i64 + l.params().k() as i64,
        None => l.params().k() as i64,
    }
}
