//! The exponential B-spline of `(D^2 - alpha^2)^k` and the well-conditioned
//! representation `L_k(x) = sum_j lambda_j M(x - j)`.
//!
//! `M = sum_i t_i E_k(x - i)`, where `t_i` are the coefficients of the
//! trigonometric polynomial `(2 cosh alpha - 2 cos xi)^k`, is supported on
//! `[-k, k]`. The sum defining it cancels heavily, so its Taylor
//! coefficients on each unit piece are formed in double-double arithmetic.
//! With `Q(xi) = sum_j M(j) e^{-i j xi}`, the fundamental function has
//! transform `M^ / Q` and `lambda_j` are the Fourier coefficients of `1 / Q`.

use std::f64::consts::TAU;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Result, SplineError};
use crate::greens_kernel::SplineParams;
use crate::spectral_symbol::MAX_SAMPLES;

/// Highest Taylor order kept on a unit piece.
const MAX_TAYLOR: usize = 120;

/// Compactly supported exponential B-spline, normalised to `M(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpBSpline {
    params: SplineParams,
    /// Taylor coefficients about `n + 1/2` on `[n, n + 1]`, `n = 0..k`.
    pieces: Vec<Vec<f64>>,
    /// `M(0), M(1), .., M(k - 1)`.
    at_integers: Vec<f64>,
}

/// Polynomial `p` in `r >= 0` with `E_k(r)` proportional to `e^{-alpha r} p(r)`;
/// the common factor `(-1)^k sqrt(pi/2) alpha^{1-2k}` is dropped.
fn kernel_poly(k: usize, alpha: f64) -> Vec<Dd> {
    let mut a = vec![Dd::ONE];
    for m in 1..k {
        let two_m = 2.0 * m as f64;
        let mut next = vec![Dd::ZERO; m + 1];
        for (j, &aj) in a.iter().enumerate() {
            next[j] = next[j] - aj.mul_f64(j as f64 + 1.0 - two_m).div_f64(two_m);
            next[j + 1] = next[j + 1] + aj.div_f64(two_m);
        }
        a = next;
    }
    let mut scale = Dd::ONE;
    for c in a.iter_mut() {
        *c = *c * scale;
        scale = scale.mul_f64(alpha);
    }
    a
}

/// `q' - alpha q`, so that `D[e^{-alpha r} q] = e^{-alpha r} (q' - alpha q)`.
fn differentiate(q: &[Dd], alpha: f64) -> Vec<Dd> {
    let mut out: Vec<Dd> = q.iter().map(|c| -c.mul_f64(alpha)).collect();
    for j in 1..q.len() {
        out[j - 1] = out[j - 1] + q[j].mul_f64(j as f64);
    }
    out
}

fn horner(q: &[Dd], r: f64) -> Dd {
    q.iter().rev().fold(Dd::ZERO, |acc, &c| acc.mul_f64(r) + c)
}

/// Coefficients `t_{-k}..t_k` of `(2 cosh alpha - w - 1/w)^k`.
fn difference_weights(k: usize, alpha: f64) -> Vec<Dd> {
    let two_cosh = Dd::exp(alpha) + Dd::exp(-alpha);
    let mut t = vec![Dd::ONE];
    for _ in 0..k {
        let mut next = vec![Dd::ZERO; t.len() + 2];
        for (i, &c) in t.iter().enumerate() {
            next[i] = next[i] - c;
            next[i + 1] = next[i + 1] + c * two_cosh;
            next[i + 2] = next[i + 2] - c;
        }
        t = next;
    }
    t
}

impl ExpBSpline {
    pub fn new(params: SplineParams) -> Self {
        let k = params.k();
        let alpha = params.alpha();
        let weights = difference_weights(k, alpha);
        // e^{-alpha h / 2} for h = 0..=4k+1
        let half = Dd::exp(-0.5 * alpha);
        let mut decay = vec![Dd::ONE];
        for h in 1..=4 * k + 2 {
            decay.push(decay[h - 1] * half);
        }

        // M at a point y with 2y an integer, from the derivative polynomial `q`
        // of the requested order; odd orders flip sign for negative arguments
        let combine = |q: &[Dd], order: usize, twice_y: i64| -> Dd {
            let mut sum = Dd::ZERO;
            for (idx, &t) in weights.iter().enumerate() {
                let i = idx as i64 - k as i64;
                let twice = twice_y - 2 * i;
                let r = twice.unsigned_abs() as usize;
                let mut v = horner(q, r as f64 / 2.0) * decay[r];
                if twice < 0 && order % 2 == 1 {
                    v = -v;
                }
                sum = sum + t * v;
            }
            sum
        };

        let poly = kernel_poly(k, alpha);
        let norm = combine(&poly, 0, 0);
        let at_integers: Vec<f64> = (0..k as i64)
            .map(|j| combine(&poly, 0, 2 * j).to_f64() / norm.to_f64())
            .collect();

        let mut pieces = vec![Vec::new(); k];
        let mut q = poly;
        let mut factorial = Dd::ONE;
        let mut quiet = 0;
        for order in 0..=MAX_TAYLOR {
            if order > 0 {
                q = differentiate(&q, alpha);
                factorial = factorial.mul_f64(order as f64);
            }
            let mut largest: f64 = 0.0;
            for (n, piece) in pieces.iter_mut().enumerate() {
                let v = combine(&q, order, 2 * n as i64 + 1);
                let coeff = v.to_f64() / factorial.to_f64() / norm.to_f64();
                largest = largest.max(coeff.abs() * 0.5f64.powi(order as i32));
                piece.push(coeff);
            }
            quiet = if largest < 1e-19 { quiet + 1 } else { 0 };
            if quiet >= 3 && order >= 2 * k {
                break;
            }
        }
        Self {
            params,
            pieces,
            at_integers,
        }
    }

    pub fn params(&self) -> SplineParams {
        self.params
    }

    /// `M(0), .., M(k - 1)`; `M(j) = 0` for `|j| >= k`.
    pub fn at_integers(&self) -> &[f64] {
        &self.at_integers
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        let n = r.floor();
        if n >= self.pieces.len() as f64 {
            return 0.0;
        }
        let t = r - n - 0.5;
        self.pieces[n as usize].iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `Q(z) = M(0) + 2 sum_j M(j) cos(j z)` at complex `z`.
    pub fn symbol(&self, z: Complex<f64>) -> Complex<f64> {
        let mut s = Complex::new(self.at_integers[0], 0.0);
        for (j, &m) in self.at_integers.iter().enumerate().skip(1) {
            s += (z * j as f64).cos() * (2.0 * m);
        }
        s
    }

    /// Distance from the real axis to the nearest zero of `Q`, the exact
    /// decay rate of `lambda_j` and of `L_k`. `None` for `k = 1`.
    pub fn decay_rate(&self) -> Option<f64> {
        if self.at_integers.len() < 2 {
            return None;
        }
        // the zeros sit on Re z = pi, where Q is real and decreasing in |Im z|
        let f = |y: f64| {
            self.at_integers
                .iter()
                .enumerate()
                .map(|(j, &m)| {
                    let w = if j == 0 { 1.0 } else { 2.0 };
                    let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                    w * s * m * (j as f64 * y).cosh()
                })
                .sum::<f64>()
        };
        // march to the first sign change; the zeros are simple and separated
        let step = 1e-3;
        let mut hi = step;
        while f(hi) > 0.0 {
            hi += step;
            if hi > 50.0 {
                return None;
            }
        }
        let mut lo = hi - step;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    /// `lambda_0, lambda_1, ..`: Fourier coefficients of `1 / Q`, kept while
    /// significant relative to `e^{-eta j}` on a contour shifted by `eta`.
    pub fn inverse_coefficients(&self, eta: Option<f64>) -> Result<Vec<f64>> {
        if self.at_integers.len() == 1 {
            return Ok(vec![1.0 / self.at_integers[0]]);
        }
        let mut planner = FftPlanner::new();
        let base = self.line_coefficients(0.0, &mut planner)?;
        let Some(eta) = eta else {
            return Ok(base);
        };
        let far = self.line_coefficients(eta, &mut planner)?;
        let shifted_scale = far
            .iter()
            .enumerate()
            .fold(0.0, |m: f64, (j, c)| m.max(c.abs() * (eta * j as f64).exp()));
        let base_scale = base.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        // switch where the shifted line's error e^{-eta j} * scale wins
        let switch = ((shifted_scale / base_scale).max(1.0).ln() / eta).ceil() as usize;
        let switch = switch.saturating_add(1);
        let mut out: Vec<f64> = base.iter().take(switch.min(base.len())).copied().collect();
        if far.len() > out.len() {
            out.extend_from_slice(&far[out.len()..]);
        }
        Ok(out)
    }

    /// Trapezoid coefficients of `1/Q` on the line `Im z = eta`, undone by
    /// `e^{-eta j}`, chopped at the rounding level of the samples.
    fn line_coefficients(&self, eta: f64, planner: &mut FftPlanner<f64>) -> Result<Vec<f64>> {
        let sample = |n: usize, planner: &mut FftPlanner<f64>| -> (Vec<f64>, f64) {
            let mut buf: Vec<Complex<f64>> = (0..n)
                .map(|i| 1.0 / self.symbol(Complex::new(TAU * i as f64 / n as f64, eta)))
                .collect();
            let size = buf.iter().fold(0.0, |m: f64, z| m.max(z.norm()));
            planner.plan_fft_inverse(n).process(&mut buf);
            (buf[..n / 4].iter().map(|z| z.re / n as f64).collect(), size)
        };
        let mut n = 64;
        let (mut prev, _) = sample(n, planner);
        loop {
            let next_n = 2 * n;
            if next_n > MAX_SAMPLES {
                return Err(SplineError::NonConvergence { samples: next_n });
            }
            let (next, size) = sample(next_n, planner);
            let floor = 1e-15 * size;
            let diff = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let last = next.iter().rposition(|c| c.abs() >= floor).unwrap_or(0);
            if diff <= floor && last < next_n / 8 {
                return Ok(next[..=last]
                    .iter()
                    .enumerate()
                    .map(|(j, s)| s * (-eta * j as f64).exp())
                    .collect());
            }
            prev = next;
            n = next_n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens_kernel::GreenKernel;

    fn spline(alpha: f64, k: usize) -> ExpBSpline {
        ExpBSpline::new(SplineParams::new(alpha, k).unwrap())
    }

    #[test]
    fn first_order_is_a_hyperbolic_hat() {
        for &alpha in &[0.5, 1.0, 2.0] {
            let m = spline(alpha, 1);
            for i in 0..=30 {
                let x = -1.5 + 0.1 * i as f64;
                let want = if x.abs() < 1.0 { (alpha * (1.0 - x.abs())).sinh() / alpha.sinh() } else { 0.0 };
                assert!((m.eval(x) - want).abs() < 1e-15, "alpha={alpha} x={x}");
            }
        }
    }

    #[test]
    fn matches_plain_difference_where_well_conditioned() {
        let p = SplineParams::new(1.5, 2).unwrap();
        let e = GreenKernel::new(p);
        let c = 2.0 * 1.5f64.cosh();
        let t = [1.0, -2.0 * c, c * c + 2.0, -2.0 * c, 1.0];
        let plain = |x: f64| (0..5).map(|i| t[i] * e.eval(x - i as f64 + 2.0)).sum::<f64>();
        let m = spline(1.5, 2);
        for i in 0..40 {
            let x = -2.0 + 0.1 * i as f64 + 0.013;
            assert!((m.eval(x) - plain(x) / plain(0.0)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn positive_even_and_compactly_supported() {
        for k in [2, 3, 6, 10] {
            let m = spline(0.5, k);
            assert_eq!(m.eval(k as f64 + 0.01), 0.0);
            for i in 0..(40 * k) {
                let x = -(k as f64) + 0.05 * i as f64 + 0.001;
                assert!(m.eval(x) > -1e-15, "k={k} x={x}");
            }
            let interior = m.eval(k as f64 - 1e-9).abs();
            assert!(interior < 1e-12, "k={k}: {interior:e}");
        }
    }

    #[test]
    fn pieces_join_continuously() {
        let m = spline(0.7, 4);
        for n in 1..4 {
            let x = n as f64;
            let jump = (m.eval(x - 1e-13) - m.eval(x + 1e-13)).abs();
            assert!(jump < 1e-11, "n={n}: {jump:e}");
            assert!((m.eval(x) - m.at_integers()[n]).abs() < 1e-14);
        }
    }

    #[test]
    fn decay_rate_is_a_zero_of_the_symbol() {
        for &(alpha, k) in &[(0.5, 3), (1.0, 2), (2.0, 6)] {
            let m = spline(alpha, k);
            let c = m.decay_rate().unwrap();
            let q = m.symbol(Complex::new(std::f64::consts::PI, c));
            assert!(q.norm() < 1e-10, "alpha={alpha} k={k}");
        }
        assert!(spline(1.0, 1).decay_rate().is_none());
    }
}
