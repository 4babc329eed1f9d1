//! Green kernel of the operator `(D^2 - alpha^2)^k`.
//!
//! The kernel is normalised by its Fourier transform,
//! `E_k^(xi) = (-1)^k (xi^2 + alpha^2)^{-k}`, under the unitary convention
//! `g^(xi) = (2 pi)^{-1/2} \int g(x) e^{-i x xi} dx`. In space it is an
//! exponential times a polynomial in `|x|`:
//!
//! ```text
//! E_k(x) = e^{-alpha |x|} * sum_{m < k} c_m |x|^m
//! ```
//!
//! The coefficients come from `G_1(x) = sqrt(pi/2) e^{-alpha|x|} / alpha`
//! (the inverse transform of `(xi^2 + alpha^2)^{-1}`) and the recurrence
//! `G_{m+1} = -(1 / (2 m alpha)) dG_m/d alpha`, carried out on
//! scale-free coefficients so the alpha-derivative is exact.

use serde::Serialize;

use crate::error::{Result, SplineError};

/// Largest supported spline order.
pub const K_MAX: usize = 30;

/// `(2 pi)^{-1/2}`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// The pair `(alpha, k)` that fixes the operator `(D^2 - alpha^2)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplineParams {
    alpha: f64,
    k: usize,
}

impl SplineParams {
    pub fn new(alpha: f64, k: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(SplineError::InvalidAlpha(alpha));
        }
        if k == 0 || k > K_MAX {
            return Err(SplineError::InvalidOrder { k, max: K_MAX });
        }
        Ok(Self { alpha, k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(-1)^k`.
    pub fn sign(&self) -> f64 {
        if self.k.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Closed-form spatial representation of `E_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenKernel {
    params: SplineParams,
    poly_coeffs: Vec<f64>,
}

/// Scale-free coefficients `a_{m,j}` with
/// `G_m(r) = sqrt(pi/2) e^{-alpha r} sum_j a_{m,j} alpha^{j+1-2m} r^j`.
fn scale_free_coeffs(k: usize) -> Vec<f64> {
    let mut a = vec![1.0];
    for m in 1..k {
        let two_m = 2.0 * m as f64;
        let mut next = vec![0.0; m + 1];
        for (j, &aj) in a.iter().enumerate() {
            // d/d alpha of alpha^{j+1-2m} r^j e^{-alpha r}, then times -1/(2 m alpha)
            next[j] -= (j as f64 + 1.0 - two_m) * aj / two_m;
            next[j + 1] += aj / two_m;
        }
        a = next;
    }
    a
}

impl GreenKernel {
    pub fn new(params: SplineParams) -> Self {
        let k = params.k();
        let alpha = params.alpha();
        let lead = params.sign() * (std::f64::consts::PI / 2.0).sqrt();
        let poly_coeffs = scale_free_coeffs(k)
            .into_iter()
            .enumerate()
            .map(|(j, a)| lead * a * alpha.powi(j as i32 + 1 - 2 * k as i32))
            .collect();
        Self {
            params,
            poly_coeffs,
        }
    }

    pub fn params(&self) -> SplineParams {
        self.params
    }

    /// Coefficients `c_0..c_{k-1}` of the polynomial factor in `|x|`.
    pub fn coeffs(&self) -> &[f64] {
        &self.poly_coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        let poly = self.poly_coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c);
        (-self.params.alpha() * r).exp() * poly
    }

    /// Polynomial coefficients of the `order`-th derivative on `x > 0`,
    /// i.e. `D^order E_k(x) = e^{-alpha x} sum_m d_m x^m` there.
    pub fn derivative_coeffs(&self, order: usize) -> Vec<f64> {
        let alpha = self.params.alpha();
        let mut p = self.poly_coeffs.clone();
        for _ in 0..order {
            // D[e^{-alpha x} p(x)] = e^{-alpha x} (p'(x) - alpha p(x))
            let mut q: Vec<f64> = p.iter().map(|&c| -alpha * c).collect();
            for j in 1..p.len() {
                q[j - 1] += j as f64 * p[j];
            }
            p = q;
        }
        p
    }

    /// One-sided derivative of order `order` at `x`; at `x = 0` the value
    /// from the right is returned.
    pub fn eval_derivative(&self, order: usize, x: f64) -> f64 {
        let d = self.derivative_coeffs(order);
        let r = x.abs();
        let poly = d.iter().rev().fold(0.0, |acc, &c| acc * r + c);
        let v = (-self.params.alpha() * r).exp() * poly;
        if x < 0.0 && order % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

pub fn build_green_kernel(params: SplineParams) -> GreenKernel {
    GreenKernel::new(params)
}

pub fn eval_green(kernel: &GreenKernel, x: f64) -> f64 {
    kernel.eval(x)
}

/// `(-1)^k (xi^2 + alpha^2)^{-k}`.
pub fn eval_green_hat(params: SplineParams, xi: f64) -> f64 {
    let a = params.alpha();
    params.sign() * (xi * xi + a * a).powi(-(params.k() as i32))
}
