//! The periodized symbol `P(xi) = sum_j E_k^(xi - 2 pi j)`, the transform of
//! the fundamental function, the reciprocal symbol `sigma = 1 / P` and its
//! Fourier coefficients.

use std::f64::consts::{PI, TAU};

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use crate::error::{Result, SplineError};
use crate::greens_kernel::{eval_green_hat, SplineParams, FRAC_1_SQRT_2PI};

/// Cap on the number of replicas on each side of the periodization.
pub const MAX_REPLICAS: usize = 10_000_000;

/// Cap on the trapezoid sample count used for the coefficients.
pub const MAX_SAMPLES: usize = 1 << 20;

/// Coefficients below this fraction of `max |c_j|` are numerical zeros.
pub const CHOP_RELATIVE: f64 = 1e-13;

const INITIAL_SAMPLES: usize = 64;

/// Relative accuracy requested from the replica sums feeding the coefficients.
const SYMBOL_TOL: f64 = 1e-15;

/// Maps `xi` into `[-pi, pi]`.
pub fn reduce_angle(xi: f64) -> f64 {
    xi - TAU * (xi / TAU).round()
}

/// Result of a replica sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicaSum {
    pub value: f64,
    /// Replicas summed explicitly on each side of the centre.
    pub replicas: usize,
    /// Estimated absolute error of the Euler-Maclaurin tail.
    pub error: f64,
}

/// `\int_U^\infty (u^2 + a^2)^{-p} du` for `U > 2 a sqrt(p)`, by the binomial
/// series in `a^2 / u^2`.
fn tail_integral(u: f64, alpha: f64, p: usize) -> f64 {
    let p_f = p as f64;
    let x = (alpha / u).powi(2);
    let mut power = u.powi(1 - 2 * p as i32);
    let mut binom = 1.0;
    let mut sum = 0.0;
    for n in 0..400 {
        let n_f = n as f64;
        let term = binom * power / (2.0 * p_f + 2.0 * n_f - 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        binom *= -(p_f + n_f) / (n_f + 1.0);
        power *= x;
    }
    sum
}

/// `sum_{t > M} ((2 pi t - xi)^2 + a^2)^{-p}` by the midpoint Euler-Maclaurin
/// formula with its first correction.
fn right_tail(alpha: f64, p: usize, xi: f64, m: usize) -> f64 {
    let a = m as f64 + 0.5;
    let u = TAU * a - xi;
    let q = u * u + alpha * alpha;
    let integral = tail_integral(u, alpha, p) / TAU;
    let slope = -2.0 * p as f64 * TAU * u * q.powi(-(p as i32) - 1);
    integral + slope / 24.0
}

/// Size of the next Euler-Maclaurin term, for both tails together.
fn tail_error(p: usize, m: usize) -> f64 {
    let two_p = 2.0 * p as f64;
    let u = TAU * m as f64;
    2.0 * 7.0 / 5760.0 * TAU.powi(3) * two_p * (two_p + 1.0) * (two_p + 2.0) * u.powi(-(2 * p as i32) - 3)
}

/// `sum_l ((xi - 2 pi l)^2 + a^2)^{-p}` for `xi` in `[-pi, pi]`, optionally
/// without the `l = 0` term. `rel_tol` bounds the tail error relative to
/// the sum.
pub fn replica_sum(alpha: f64, p: usize, xi: f64, rel_tol: f64, skip_center: bool) -> Result<ReplicaSum> {
    if !(rel_tol > 0.0) {
        return Err(SplineError::InvalidArgument(format!("tolerance must be > 0, got {rel_tol}")));
    }
    let a2 = alpha * alpha;
    let pi_ = -(p as i32);
    let term = |l: i64| {
        let u = xi - TAU * l as f64;
        (u * u + a2).powi(pi_)
    };
    // the nearest off-centre replicas bound the sum from below
    let floor = if skip_center {
        term(1) + term(-1)
    } else {
        term(0)
    };
    let min_m = ((alpha * 2.0 * (p as f64).sqrt() + PI) / TAU).ceil() as usize + 2;
    let mut m = min_m.max(8);
    while tail_error(p, m) > rel_tol * floor {
        m *= 2;
        if m > MAX_REPLICAS {
            return Err(SplineError::ToleranceUnreachable {
                tol: rel_tol,
                achieved: tail_error(p, MAX_REPLICAS) / floor,
            });
        }
    }
    // smallest terms first
    let mut value = right_tail(alpha, p, xi, m) + right_tail(alpha, p, -xi, m);
    for l in (1..=m as i64).rev() {
        value += term(l) + term(-l);
    }
    if !skip_center {
        value += term(0);
    }
    Ok(ReplicaSum {
        value,
        replicas: m,
        error: tail_error(p, m),
    })
}

/// `sum_j E_k^(xi - 2 pi j)`; carries the sign `(-1)^k`. `tol` is relative.
pub fn periodized_green_hat(params: SplineParams, xi: f64, tol: f64) -> Result<f64> {
    let s = replica_sum(params.alpha(), params.k(), reduce_angle(xi), tol, false)?;
    Ok(params.sign() * s.value)
}

/// `E_k^(xi) / P(xi)` in `(0, 1]`, i.e. `sqrt(2 pi) L_k^(xi)`.
pub fn alias_ratio(params: SplineParams, xi: f64, tol: f64) -> Result<f64> {
    let p = periodized_green_hat(params, xi, tol)?;
    Ok(eval_green_hat(params, xi) / p)
}

/// Fourier transform of the fundamental function,
/// `(2 pi)^{-1/2} E_k^(xi) / sum_j E_k^(xi - 2 pi j)`.
pub fn fundamental_hat(params: SplineParams, xi: f64, tol: f64) -> Result<f64> {
    Ok(FRAC_1_SQRT_2PI * alias_ratio(params, xi, tol)?)
}

/// `sigma(xi) = 1 / sum_j E_k^(xi - 2 pi j)`, a 2 pi-periodic analytic
/// function with sign `(-1)^k`.
pub fn reciprocal_symbol(params: SplineParams, xi: f64, tol: f64) -> Result<f64> {
    Ok(1.0 / periodized_green_hat(params, xi, tol)?)
}

/// Exponential envelope `|c_j| <= amplitude * exp(-rate |j|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub rate: f64,
    pub amplitude: f64,
}

impl DecayFit {
    pub fn bound(&self, j: f64) -> f64 {
        self.amplitude * (-self.rate * j.abs()).exp()
    }

    /// `sum_{|j| > n} bound(j)`.
    pub fn two_sided_tail(&self, n: usize) -> f64 {
        if self.rate <= 0.0 {
            return f64::INFINITY;
        }
        2.0 * self.bound(n as f64 + 1.0) / (1.0 - (-self.rate).exp())
    }
}

/// Truncated symmetric table of the Fourier coefficients of `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    params: SplineParams,
    tol: f64,
    half_width: usize,
    /// `c_0, c_1, .., c_J`; negative indices mirror these.
    coeffs: Vec<f64>,
    tail_bound: f64,
    decay: Option<DecayFit>,
    samples: usize,
}

impl CoefficientTable {
    pub fn params(&self) -> SplineParams {
        self.params
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `J`: the table holds `c_{-J}..c_J`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `c_j` for any integer `j` (zero outside the table).
    pub fn get(&self, j: i64) -> f64 {
        self.coeffs.get(j.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// Non-negative half `c_0..c_J`.
    pub fn one_sided(&self) -> &[f64] {
        &self.coeffs
    }

    /// `(j, c_j)` for `j = -J..=J`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.half_width as i64;
        (-n..=n).map(move |j| (j, self.get(j)))
    }

    /// Bound on `sum_{|j| > J} |c_j|`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Largest coefficient magnitude; tolerances of the table are relative to it.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Fitted decay, `None` when only `c_{-1}, c_0, c_1` are nonzero.
    pub fn decay(&self) -> Option<DecayFit> {
        self.decay
    }

    /// Trapezoid sample count at convergence.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// `sum_j c_j e^{-i j xi}`, which reproduces `sigma(xi)`.
    pub fn synthesize(&self, xi: f64) -> f64 {
        let mut s = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            s += 2.0 * c * (j as f64 * xi).cos();
        }
        s + self.coeffs[0]
    }
}

/// Least-squares slope of `ln |c_j|` against `j`, with the amplitude raised
/// to the upper envelope of the data.
fn fit_decay(one_sided: &[f64]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = one_sided
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| (j as f64, c.abs().ln()))
        .collect();
    let nonzero = 2 * pts.len() + usize::from(one_sided.first().is_some_and(|c| *c != 0.0));
    if pts.len() < 2 {
        return Err(SplineError::DegenerateFit { nonzero });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let rate = -sxy / sxx;
    let amplitude = one_sided
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| c.abs() * (rate * j as f64).exp())
        .fold(0.0, f64::max);
    Ok(DecayFit { rate, amplitude })
}

/// Refits the exponential envelope of a table's coefficients.
pub fn decay_estimate(table: &CoefficientTable) -> Result<DecayFit> {
    fit_decay(&table.coeffs)
}

/// Samples `sigma` on `n` equispaced points and returns the trapezoid
/// Fourier coefficients `c_0..c_{n/2}`.
fn trapezoid_coefficients(params: SplineParams, n: usize, planner: &mut FftPlanner<f64>) -> Result<Vec<f64>> {
    let mut buf = Vec::with_capacity(n);
    for i in 0..n {
        // sigma is even, so only [0, pi] needs evaluating
        let idx = i.min(n - i);
        let xi = TAU * idx as f64 / n as f64;
        let s = reciprocal_symbol(params, xi, SYMBOL_TOL)?;
        buf.push(Complex::new(s, 0.0));
    }
    planner.plan_fft_forward(n).process(&mut buf);
    Ok(buf[..=n / 2].iter().map(|z| z.re / n as f64).collect())
}

/// Fourier coefficients `c_j = (2 pi)^{-1} \int_{-pi}^{pi} sigma(xi) e^{i j xi} dxi`
/// of the reciprocal symbol, truncated to `|j| <= J` with the tail below
/// `tol * max |c_j|`.
pub fn compute_coefficients(params: SplineParams, tol: f64) -> Result<CoefficientTable> {
    if !(1e-14..=1e-2).contains(&tol) {
        return Err(SplineError::InvalidTolerance {
            tol,
            min: 1e-14,
            max: 1e-2,
        });
    }
    let mut planner = FftPlanner::new();
    let mut n = INITIAL_SAMPLES;
    let mut prev = trapezoid_coefficients(params, n, &mut planner)?;
    let (raw, samples) = loop {
        let next_n = 2 * n;
        if next_n > MAX_SAMPLES {
            return Err(SplineError::NonConvergence { samples: next_n });
        }
        let next = trapezoid_coefficients(params, next_n, &mut planner)?;
        let scale = next[0].abs().max(next[1].abs());
        let floor = CHOP_RELATIVE * scale;
        let compared = n / 4;
        let diff = (0..=compared).map(|j| (next[j] - prev[j]).abs()).fold(0.0, f64::max);
        // significant entries must sit well inside the alias-free range
        let last_significant = next.iter().rposition(|c| c.abs() >= floor).unwrap_or(0);
        if diff <= 0.1 * tol * scale && last_significant < next_n / 4 {
            break (next, next_n);
        }
        prev = next;
        n = next_n;
    };

    let scale = raw.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
    let floor = CHOP_RELATIVE * scale;
    let mut chopped: Vec<f64> = raw[..samples / 4]
        .iter()
        .map(|&c| if c.abs() < floor { 0.0 } else { c })
        .collect();
    let last = chopped.iter().rposition(|c| *c != 0.0).unwrap_or(0);
    chopped.truncate(last + 1);

    let decay = fit_decay(&chopped).ok();
    let target = tol * scale;
    let (half_width, tail_bound) = match decay {
        None => (last, 0.0),
        Some(fit) => {
            let mut j = 0;
            while j < last && fit.two_sided_tail(j) >= target {
                j += 1;
            }
            let tail = if j == last { 0.0 } else { fit.two_sided_tail(j) };
            (j, tail)
        }
    };
    chopped.truncate(half_width + 1);
    Ok(CoefficientTable {
        params,
        tol,
        half_width,
        coeffs: chopped,
        tail_bound,
        decay,
        samples,
    })
}
