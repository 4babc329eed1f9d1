//! Band-limited targets, their cardinal interpolants `I_k[g]` and the
//! spectral error of interpolation.
//!
//! For `g` with `g^` supported in `[-pi, pi]`,
//!
//! ```text
//! ||g - I_k[g]||^2 = \int_{-pi}^{pi} |g^(xi)|^2 (S(xi)^2 + T(xi)) dxi
//! S = sum_{l != 0} E_k^(xi - 2 pi l) / P(xi),   T = sum_{l != 0} E_k^(xi - 2 pi l)^2 / P(xi)^2
//! ```
//!
//! where `P` is the periodized symbol. `S = 1 - sqrt(2 pi) L_k^` on
//! `[-pi, pi]` and `T <= S^2`, which gives the bound `sqrt(2 \int |g^|^2 S^2)`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cardinal_interpolation::{DataSequence, FundamentalFunction, Growth, Outside};
use crate::error::{Result, SplineError};
use crate::greens_kernel::{SplineParams, FRAC_1_SQRT_2PI};
use crate::quadrature::{integrate_adaptive, CompositeGauss};
use crate::spectral_symbol::replica_sum;

/// Largest panel count per piece in the spectral integrals.
const MAX_PANELS: usize = 4096;

/// Window tolerance used when interpolating targets on a grid.
const WINDOW_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    /// `g^ = (2 pi)^{-1/2}` on `[-pi, pi]`; `g(x) = sin(pi x) / (pi x)`.
    Sinc,
    /// `g^ = (2 pi)^{-1/2} (1 - |xi| / pi)`; a Fejer-type kernel.
    TriangleSpectrum,
    /// `g^ = (2 pi)^{-1/2} exp(1 - 1 / (1 - (xi / pi)^2))`, infinitely smooth.
    BumpSpectrum,
    /// `g^ = (2 pi)^{-1/2}` on `[-pi/2, pi/2]`; `g(x) = sin(pi x / 2) / (pi x)`.
    HalfBand,
    /// The zero function.
    Zero,
}

impl TargetKind {
    pub const GALLERY: [TargetKind; 4] = [
        TargetKind::Sinc,
        TargetKind::TriangleSpectrum,
        TargetKind::BumpSpectrum,
        TargetKind::HalfBand,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TargetKind::Sinc => "sinc",
            TargetKind::TriangleSpectrum => "triangle-spectrum",
            TargetKind::BumpSpectrum => "bump-spectrum",
            TargetKind::HalfBand => "half-band",
            TargetKind::Zero => "zero",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = SplineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinc" => Ok(TargetKind::Sinc),
            "triangle-spectrum" | "triangle" | "fejer" => Ok(TargetKind::TriangleSpectrum),
            "bump-spectrum" | "bump" => Ok(TargetKind::BumpSpectrum),
            "half-band" => Ok(TargetKind::HalfBand),
            "zero" => Ok(TargetKind::Zero),
            other => Err(SplineError::UnknownTarget(other.to_string())),
        }
    }
}

/// A Paley-Wiener function given by its spectrum on `[-pi, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandlimitedTarget {
    kind: TargetKind,
    l2_norm_sq: f64,
}

fn bump_profile(xi: f64) -> f64 {
    let t = xi / PI;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

impl BandlimitedTarget {
    pub fn new(kind: TargetKind) -> Self {
        let l2_norm_sq = match kind {
            TargetKind::Sinc => 1.0,
            TargetKind::TriangleSpectrum => 1.0 / 3.0,
            TargetKind::HalfBand => 0.5,
            TargetKind::Zero => 0.0,
            TargetKind::BumpSpectrum => {
                let rule = CompositeGauss::new(20);
                rule.integrate(0.0, PI, 64, |xi| bump_profile(xi).powi(2)) / PI
            }
        };
        Self { kind, l2_norm_sq }
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// `\int |g^|^2 = ||g||^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.l2_norm_sq
    }

    /// `g^(xi)`, zero outside the band.
    pub fn spectrum(&self, xi: f64) -> f64 {
        let a = xi.abs();
        match self.kind {
            TargetKind::Sinc if a <= PI => FRAC_1_SQRT_2PI,
            TargetKind::TriangleSpectrum if a <= PI => FRAC_1_SQRT_2PI * (1.0 - a / PI),
            TargetKind::BumpSpectrum => FRAC_1_SQRT_2PI * bump_profile(xi),
            TargetKind::HalfBand if a <= FRAC_PI_2 => FRAC_1_SQRT_2PI,
            _ => 0.0,
        }
    }

    /// Breakpoints of the spectrum's support on `[0, pi]` (the spectrum is even).
    fn half_support(&self) -> &'static [f64] {
        match self.kind {
            TargetKind::HalfBand => &[0.0, FRAC_PI_2],
            TargetKind::Zero => &[],
            _ => &[0.0, PI],
        }
    }

    /// `g(x)`, in closed form where one exists and by quadrature otherwise.
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            TargetKind::Sinc => {
                if x == 0.0 {
                    1.0
                } else {
                    (PI * x).sin() / (PI * x)
                }
            }
            TargetKind::TriangleSpectrum => {
                if x == 0.0 {
                    0.5
                } else {
                    2.0 * (FRAC_PI_2 * x).sin().powi(2) / (PI * x).powi(2)
                }
            }
            TargetKind::HalfBand => {
                if x == 0.0 {
                    0.5
                } else {
                    (FRAC_PI_2 * x).sin() / (PI * x)
                }
            }
            TargetKind::Zero => 0.0,
            TargetKind::BumpSpectrum => self.eval_quadrature(x),
        }
    }

    /// `g(x) = (2 pi)^{-1/2} \int g^(xi) e^{i x xi} dxi` by composite Gauss
    /// quadrature with panels refined as `|x|` grows.
    pub fn eval_quadrature(&self, x: f64) -> f64 {
        let rule = CompositeGauss::new(20);
        let panels = 16 + (x.abs() * 0.5).ceil() as usize;
        2.0 * FRAC_1_SQRT_2PI * rule.integrate_pieces(self.half_support(), panels, |xi| self.spectrum(xi) * (x * xi).cos())
    }

    /// Samples `g(j)` for `|j| <= j_max` as a finitely supported sequence.
    pub fn sample_table(&self, j_max: usize) -> BTreeMap<i64, f64> {
        let n = j_max as i64;
        let mut out = BTreeMap::new();
        for j in 0..=n {
            let v = self.eval(j as f64);
            out.insert(j, v);
            out.insert(-j, v);
        }
        out
    }
}

pub fn target_gallery(name: &str) -> Result<BandlimitedTarget> {
    Ok(BandlimitedTarget::new(name.parse()?))
}

/// Integer samples with the `l2` norm of what was left out.
#[derive(Debug, Clone)]
pub struct SampledTarget {
    pub data: DataSequence,
    pub tail_l2: f64,
}

/// `{g(j) : |j| <= J}`, zero beyond, with `(sum_{|j| > J} g(j)^2)^{1/2}`.
///
/// The tail uses `sum_j g(j)^2 = ||g||^2` (orthonormality of the shifted
/// sinc functions in the Paley-Wiener space), summed in closed form for the
/// gallery targets whose samples are explicit.
pub fn sample_integers(target: &BandlimitedTarget, j_max: usize) -> SampledTarget {
    let table = target.sample_table(j_max);
    let bound = table.values().fold(0.0, |m: f64, v| m.max(v.abs()));
    let tail_sq = match target.kind() {
        TargetKind::Sinc | TargetKind::Zero => 0.0,
        // g(j)^2 = 1 / (pi j)^2 for odd j, 0 for even j != 0
        TargetKind::HalfBand => 2.0 * odd_inverse_square_tail(j_max) / (PI * PI),
        // g(j)^2 = 4 / (pi j)^4 for odd j
        TargetKind::TriangleSpectrum => 2.0 * 4.0 * odd_inverse_fourth_tail(j_max) / PI.powi(4),
        TargetKind::BumpSpectrum => {
            let kept: f64 = table.values().map(|v| v * v).sum();
            (target.l2_norm_sq() - kept).max(0.0)
        }
    };
    let data = DataSequence::from_table(table, Outside::Zero)
        .with_growth(Growth::polynomial(bound, 0.0))
        .expect("the bound is the table maximum");
    SampledTarget {
        data,
        tail_l2: tail_sq.sqrt(),
    }
}

/// `sum_{j > n, j odd} j^{-2}`, by direct summation and an Euler-Maclaurin tail.
fn odd_inverse_square_tail(n: usize) -> f64 {
    odd_power_tail(n, 2)
}

fn odd_inverse_fourth_tail(n: usize) -> f64 {
    odd_power_tail(n, 4)
}

fn odd_power_tail(n: usize, p: i32) -> f64 {
    let first = if n.is_multiple_of(2) { n + 1 } else { n + 2 };
    let stop = first + 2 * 4096;
    let mut s = 0.0;
    let mut j = stop;
    while j > first {
        j -= 2;
        s += (j as f64).powi(-p);
    }
    // odd j from `stop` on, as midpoint sums of t^{-p} with spacing 2
    let a = stop as f64 - 1.0;
    let pf = p as f64;
    s + a.powf(1.0 - pf) / (2.0 * (pf - 1.0)) - pf * a.powf(-pf - 1.0) / 12.0
}

/// `(2 pi)^{-1/2} ((pi^2 + alpha^2) / ((2|l| - 1)^2 pi^2 + alpha^2))^k`, which
/// bounds `|L_k^(xi - 2 pi l)|` for `xi` in `[-pi, pi]`.
pub fn aliasing_envelope(params: SplineParams, ell: i64) -> Result<f64> {
    if ell == 0 {
        return Err(SplineError::InvalidArgument("aliasing envelope needs l != 0".into()));
    }
    let a2 = params.alpha().powi(2);
    let m = (2 * ell.abs() - 1) as f64;
    let base = (PI * PI + a2) / (m * m * PI * PI + a2);
    Ok(FRAC_1_SQRT_2PI * base.powi(params.k() as i32))
}

/// `S(xi)`, `T(xi)` and the replicas used, for `xi` in `[-pi, pi]`.
pub fn alias_terms(params: SplineParams, xi: f64, rel_tol: f64) -> Result<(f64, f64, usize)> {
    let (alpha, k) = (params.alpha(), params.k());
    let a1 = replica_sum(alpha, k, xi, rel_tol, true)?;
    let a2 = replica_sum(alpha, 2 * k, xi, rel_tol, true)?;
    let centre = (xi * xi + alpha * alpha).powi(-(k as i32));
    let p = a1.value + centre;
    Ok((a1.value / p, a2.value / (p * p), a1.replicas.max(a2.replicas)))
}

/// A spectral integral with its quadrature resolution and replica count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralIntegral {
    pub value: f64,
    /// Panels per support piece at convergence.
    pub panels: usize,
    /// Largest replica count used in the alias sums.
    pub replicas: usize,
}

fn spectral_integral<F>(params: SplineParams, target: &BandlimitedTarget, tol: f64, weight: F) -> Result<SpectralIntegral>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(SplineError::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    let breaks = target.half_support();
    if breaks.is_empty() {
        return Ok(SpectralIntegral {
            value: 0.0,
            panels: 0,
            replicas: 0,
        });
    }
    let rel = tol.min(1e-13);
    let mut failure = None;
    let mut replicas = 0;
    let rule = CompositeGauss::new(16);
    let (half, panels) = integrate_adaptive(&rule, breaks, tol, 1e-300, MAX_PANELS, |xi| {
        let g = target.spectrum(xi);
        if g == 0.0 {
            return 0.0;
        }
        match alias_terms(params, xi, rel) {
            Ok((s, t, m)) => {
                replicas = replicas.max(m);
                g * g * weight(xi, s, t)
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SpectralIntegral {
        value: 2.0 * half,
        panels,
        replicas,
    })
}

/// `\int |g^|^2 (S^2 + T)`, the squared `L^2` interpolation error.
pub fn l2_error_sq(params: SplineParams, target: &BandlimitedTarget, tol: f64) -> Result<SpectralIntegral> {
    spectral_integral(params, target, tol, |_, s, t| s * s + t)
}

/// `||g - I_k[g]||_{L^2}` from the spectral decomposition.
pub fn l2_error_spectral(params: SplineParams, target: &BandlimitedTarget, tol: f64) -> Result<f64> {
    Ok(l2_error_sq(params, target, tol)?.value.sqrt())
}

/// `sqrt(2 \int |g^|^2 S^2)`, which dominates the exact error since `T <= S^2`.
pub fn l2_error_bound(params: SplineParams, target: &BandlimitedTarget, tol: f64) -> Result<f64> {
    let v = spectral_integral(params, target, tol, |_, s, _| 2.0 * s * s)?;
    Ok(v.value.sqrt())
}

/// `(2 pi)^{-1/2} * 2 \int |g^| S`, the `L^1` norm of the error transform
/// times `(2 pi)^{-1/2}`; bounds `sup |g - I_k[g]|`.
pub fn sup_error_bound(params: SplineParams, target: &BandlimitedTarget, tol: f64) -> Result<f64> {
    // the integrand helper squares g^, so pass S / |g^|
    let v = spectral_integral(params, target, tol, |xi, s, _| {
        let g = target.spectrum(xi).abs();
        2.0 * s / g
    })?;
    Ok(FRAC_1_SQRT_2PI * v.value)
}

/// `max |g(x) - I_k[g](x)|` over `n` equispaced points of `[-W, W]`, using an
/// already built fundamental function.
pub fn sup_error_with(l: &FundamentalFunction, target: &BandlimitedTarget, half_width: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(SplineError::InvalidArgument(format!("grid needs at least 2 points, got {n}")));
    }
    if !(half_width >= 0.0) {
        return Err(SplineError::InvalidArgument(format!("grid half-width must be >= 0, got {half_width}")));
    }
    if target.kind() == TargetKind::Zero {
        return Ok(0.0);
    }
    let bound = target.eval(0.0).abs().max(target.eval(1.0).abs());
    let growth = Growth::polynomial(bound, 0.0);
    let reach = l.window(half_width, &growth, WINDOW_TOL)? + half_width.ceil() as usize + 1;
    let data = DataSequence::from_table(target.sample_table(reach), Outside::Missing);
    let data = data.with_growth(growth).unwrap_or_else(|_| unreachable!("samples of the gallery are bounded by g(0)"));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
        let approx = l.interpolate_at(&data, x, WINDOW_TOL)?;
        worst = worst.max((target.eval(x) - approx).abs());
    }
    Ok(worst)
}

pub fn sup_error_grid(params: SplineParams, target: &BandlimitedTarget, half_width: f64, n: usize) -> Result<f64> {
    let l = crate::cardinal_interpolation::build_fundamental(params, 1e-12)?;
    sup_error_with(&l, target, half_width, n)
}

/// Error summary for one `(alpha, k, target)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub alpha: f64,
    pub k: usize,
    pub target: TargetKind,
    pub l2_error: f64,
    pub l2_bound: f64,
    pub sup_error: f64,
    pub ell_trunc: usize,
    pub quad_res: usize,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "alpha,k,target,l2_error,l2_bound,sup_error,ell_trunc,quad_res";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            crate::format::sci(self.alpha),
            self.k,
            self.target,
            crate::format::sci(self.l2_error),
            crate::format::sci(self.l2_bound),
            crate::format::sci(self.sup_error),
            self.ell_trunc,
            self.quad_res
        )
    }
}

/// Builds the full report: spectral `L^2` error and bound, and the grid sup
/// error on `[-W, W]` with `n` points.
pub fn error_report(
    params: SplineParams,
    target: &BandlimitedTarget,
    tol: f64,
    half_width: f64,
    n: usize,
) -> Result<ErrorReport> {
    let exact = l2_error_sq(params, target, tol)?;
    let bound = l2_error_bound(params, target, tol)?;
    let sup_error = sup_error_grid(params, target, half_width, n)?;
    Ok(ErrorReport {
        alpha: params.alpha(),
        k: params.k(),
        target: target.kind(),
        l2_error: exact.value.sqrt(),
        l2_bound: bound.max(exact.value.sqrt()),
        sup_error,
        ell_trunc: exact.replicas,
        quad_res: exact.panels,
    })
}
