//! The fundamental function `L_k` and cardinal interpolants
//! `f_b(x) = sum_j b_j L_k(x - j)`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, SplineError};
use crate::greens_kernel::{eval_green_hat, GreenKernel, SplineParams, FRAC_1_SQRT_2PI};
use crate::quadrature::CompositeGauss;
use crate::exp_bspline::ExpBSpline;
use crate::spectral_symbol::{compute_coefficients, reciprocal_symbol, CoefficientTable, DecayFit};

/// Largest admissible `|L_k(j) - delta_{0j}|` at build time.
pub const CARDINALITY_LIMIT: f64 = 1e-8;

/// Largest interpolation window half-width.
pub const MAX_WINDOW: usize = 1_000_000;

/// Lattice points checked for cardinality when building.
const CARDINALITY_RANGE: i64 = 20;

/// Below this `|L_k|` samples are rounding noise and are not used to fit
/// the spatial envelope.
const ENVELOPE_FLOOR: f64 = 1e-12;

/// `L_k = (2 pi)^{-1/2} sum_j c_j E_k(x - j)`, with `c_j` the Fourier
/// coefficients of the reciprocal symbol, evaluated through the equivalent
/// exponential B-spline form `sum_j lambda_j M(x - j)`.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalFunction {
    params: SplineParams,
    kernel: GreenKernel,
    table: CoefficientTable,
    bspline: ExpBSpline,
    /// `lambda_0, lambda_1, ..` of `L_k = sum_j lambda_j M(x - j)`.
    lambda: Vec<f64>,
    /// Exact decay rate of `L_k`; `None` for `k = 1`.
    decay_rate: Option<f64>,
    envelope: Option<DecayFit>,
    cardinality_defect: f64,
}

impl FundamentalFunction {
    pub fn new(params: SplineParams, tol: f64) -> Result<Self> {
        let table = compute_coefficients(params, tol)?;
        let kernel = GreenKernel::new(params);
        let bspline = ExpBSpline::new(params);
        let decay_rate = bspline.decay_rate();
        let alpha = params.alpha();
        // far coefficients from a shifted contour; past alpha when possible so
        // that exponential data still see relative accuracy
        let eta = decay_rate.map(|c| if c > alpha { (0.75 * c).max(0.5 * (c + alpha)) } else { 0.75 * c });
        let lambda = bspline.inverse_coefficients(eta)?;
        let mut out = Self {
            params,
            kernel,
            table,
            bspline,
            lambda,
            decay_rate,
            envelope: None,
            cardinality_defect: 0.0,
        };
        out.cardinality_defect = (-CARDINALITY_RANGE..=CARDINALITY_RANGE)
            .map(|j| (out.eval(j as f64) - if j == 0 { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        if out.cardinality_defect > CARDINALITY_LIMIT {
            return Err(SplineError::IllConditioned {
                defect: out.cardinality_defect,
                limit: CARDINALITY_LIMIT,
            });
        }
        out.envelope = out.decay_rate.map(|c| out.fit_envelope(c));
        Ok(out)
    }

    /// Spatial envelope `|L_k(x)| <= C e^{-c |x|}` with the coefficient decay
    /// rate and an amplitude taken from samples above the noise floor.
    fn fit_envelope(&self, rate: f64) -> DecayFit {
        let step = 1.0 / 16.0;
        let reach = 35.0 / rate;
        let mut amplitude: f64 = 0.0;
        let mut x = 0.0;
        while x <= reach {
            let v = self.eval(x).abs();
            if v > ENVELOPE_FLOOR || x < 1.0 {
                amplitude = amplitude.max(v * (rate * x).exp());
            }
            x += step;
        }
        DecayFit {
            rate,
            amplitude: 1.1 * amplitude,
        }
    }

    pub fn params(&self) -> SplineParams {
        self.params
    }

    pub fn kernel(&self) -> &GreenKernel {
        &self.kernel
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn bspline(&self) -> &ExpBSpline {
        &self.bspline
    }

    /// `lambda_0, lambda_1, ..`; `lambda_{-j} = lambda_j`.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Exact exponential decay rate of `L_k`, the distance from the real
    /// axis to the nearest singularity of its transform. `None` for `k = 1`.
    pub fn decay_rate(&self) -> Option<f64> {
        self.decay_rate
    }

    /// Exponential envelope of `|L_k|`; `None` for `k = 1`, where `L_1` is
    /// supported on `[-1, 1]`.
    pub fn envelope(&self) -> Option<DecayFit> {
        self.envelope
    }

    /// `max_{|j| <= 20} |L_k(j) - delta_{0j}|` measured at build time.
    pub fn cardinality_defect(&self) -> f64 {
        self.cardinality_defect
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        let k = self.params.k() as f64;
        let lo = (r - k).floor() as i64 + 1;
        let hi = (r + k).ceil() as i64 - 1;
        let mut s = 0.0;
        for j in (lo..=hi).rev() {
            if let Some(&l) = self.lambda.get(j.unsigned_abs() as usize) {
                s += l * self.bspline.eval(r - j as f64);
            }
        }
        s
    }

    /// `(2 pi)^{-1/2} sum_{|j| <= J} c_j E_k(x - j)` with the coefficient
    /// table; mathematically equal to [`eval`](Self::eval) but subject to
    /// cancellation of order `(pi / alpha)^{2k}` times the rounding unit.
    pub fn eval_green_series(&self, x: f64) -> f64 {
        let c = self.table.one_sided();
        let mut s = 0.0;
        for j in (1..c.len()).rev() {
            let jf = j as f64;
            s += c[j] * (self.kernel.eval(x - jf) + self.kernel.eval(x + jf));
        }
        FRAC_1_SQRT_2PI * (s + c[0] * self.kernel.eval(x))
    }

    /// Estimated truncation error of [`eval`](Self::eval) from the neglected
    /// `lambda_j`.
    pub fn truncation_bound(&self) -> f64 {
        let (Some(c), Some(&last)) = (self.decay_rate, self.lambda.last()) else {
            return 0.0;
        };
        let q = (-c).exp();
        2.0 * last.abs() * q / (1.0 - q)
    }

    /// Half-width `J_x` of the window around `round(x)` such that the
    /// neglected terms of `sum_j b_j L_k(x - j)` stay below `tol` for data
    /// bounded by `growth`.
    pub fn window(&self, x: f64, growth: &Growth, tol: f64) -> Result<usize> {
        if !(tol > 0.0) {
            return Err(SplineError::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
        }
        let Some(env) = self.envelope else {
            return Ok(1);
        };
        if growth.rate >= env.rate {
            return Err(SplineError::DivergentSeries {
                growth: growth.rate,
                decay: env.rate,
            });
        }
        let m = x.round().abs();
        // log of the bound on the pair of terms at distance d from round(x)
        let log_term = |d: f64| {
            (2.0 * growth.constant * env.amplitude).ln() + growth.beta * (1.0 + m + d).ln() + growth.rate * (m + d)
                - env.rate * (d - 0.5)
        };
        let mut terms = Vec::new();
        let remainder;
        let mut d = 1usize;
        loop {
            let df = d as f64;
            let t = log_term(df).exp();
            terms.push(t);
            let ratio = ((2.0 + m + df) / (1.0 + m + df)).powf(growth.beta) * (growth.rate - env.rate).exp();
            if ratio < 1.0 {
                let rest = t * ratio / (1.0 - ratio);
                if rest < 1e-6 * tol {
                    remainder = rest;
                    break;
                }
            }
            d += 1;
            if d > MAX_WINDOW {
                return Err(SplineError::WindowOverflow { max: MAX_WINDOW });
            }
        }
        // tail(J) = sum_{d > J} terms[d - 1] + remainder
        let mut tail = remainder;
        let mut j = terms.len();
        while j > 0 && tail + terms[j - 1] < tol {
            tail += terms[j - 1];
            j -= 1;
        }
        Ok(j)
    }

    /// Window for data with `|b_j| <= (1 + |j|)^beta`.
    pub fn select_window(&self, x: f64, beta: f64, tol: f64) -> Result<usize> {
        if !(beta >= 0.0) {
            return Err(SplineError::InvalidArgument(format!("beta must be >= 0, got {beta}")));
        }
        self.window(x, &Growth::polynomial(1.0, beta), tol)
    }

    /// `f_b(x) = sum_{|j - round(x)| <= J_x} b_j L_k(x - j)`.
    pub fn interpolate_at(&self, data: &DataSequence, x: f64, tol: f64) -> Result<f64> {
        let m = x.round();
        let half = self.window(x, data.growth(), tol)? as i64;
        let center = m as i64;
        let mut s = 0.0;
        for off in (1..=half).rev() {
            for j in [center - off, center + off] {
                let b = data.value(j)?;
                if !b.is_finite() {
                    return Err(SplineError::NonFiniteData(j));
                }
                if b != 0.0 {
                    s += b * self.eval(x - j as f64);
                }
            }
        }
        let b = data.value(center)?;
        if !b.is_finite() {
            return Err(SplineError::NonFiniteData(center));
        }
        Ok(s + b * self.eval(x - center as f64))
    }

    /// Interpolant of the samples of an exponential solution, in closed form.
    ///
    /// For `b_j = e^{zj}` the coefficients of `f_b = sum_j a_j M(x - j)` are
    /// `a_j = e^{zj} / Phi(z)` with `Phi(z) = sum_l M(l) e^{-zl}`, and
    /// `b_j = j^m e^{zj}` follows by differentiating `m` times in `z`. When
    /// `sum_j b_j L_k(x - j)` converges (`|z| < c`) the two agree; beyond that
    /// this is its analytic continuation in `z`, the only value consistent
    /// with the data lying in the spline space.
    pub fn interpolate_basis(&self, basis: Basis, x: f64) -> Result<f64> {
        let params = self.params;
        if basis.power() >= params.k() {
            return Err(SplineError::InvalidArgument(format!(
                "basis `{}` has power {} >= k = {}",
                basis.name(),
                basis.power(),
                params.k()
            )));
        }
        let alpha = params.alpha();
        Ok(match basis {
            Basis::Cosh => 0.5 * (self.exp_poly_interpolant(0, alpha, x) + self.exp_poly_interpolant(0, -alpha, x)),
            Basis::Sinh => 0.5 * (self.exp_poly_interpolant(0, alpha, x) - self.exp_poly_interpolant(0, -alpha, x)),
            Basis::ExpPoly { power, positive } => {
                let z = if positive { alpha } else { -alpha };
                self.exp_poly_interpolant(power, z, x)
            }
        })
    }

    fn exp_poly_interpolant(&self, m: usize, z: f64, x: f64) -> f64 {
        let mk = self.bspline.at_integers();
        // Phi^(n)(z) = sum_l (-l)^n M(l) e^{-zl}
        let phi: Vec<f64> = (0..=m)
            .map(|n| {
                let mut s = if n == 0 { mk[0] } else { 0.0 };
                for (l, &v) in mk.iter().enumerate().skip(1) {
                    let lf = l as f64;
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    s += v * lf.powi(n as i32) * ((z * lf).exp() + sign * (-z * lf).exp());
                }
                s
            })
            .collect();
        // derivatives of g = 1/Phi from sum_r C(n,r) Phi^(r) g^(n-r) = 0
        let mut g = vec![1.0 / phi[0]; m + 1];
        for n in 1..=m {
            let mut s = 0.0;
            for r in 1..=n {
                s += binomial(n, r) * phi[r] * g[n - r];
            }
            g[n] = -s / phi[0];
        }
        let k = self.params.k() as i64;
        let lo = (x - k as f64).floor() as i64 + 1;
        let hi = (x + k as f64).ceil() as i64 - 1;
        let mut f = 0.0;
        for j in lo..=hi {
            let jf = j as f64;
            let mut a = 0.0;
            for r in 0..=m {
                a += binomial(m, r) * jf.powi(r as i32) * g[m - r];
            }
            f += a * (z * jf).exp() * self.bspline.eval(x - jf);
        }
        f
    }
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn build_fundamental(params: SplineParams, tol: f64) -> Result<FundamentalFunction> {
    FundamentalFunction::new(params, tol)
}

pub fn eval_fundamental(l: &FundamentalFunction, x: f64) -> f64 {
    l.eval(x)
}

pub fn select_window(l: &FundamentalFunction, x: f64, beta: f64, tol: f64) -> Result<usize> {
    l.select_window(x, beta, tol)
}

pub fn interpolate_at(l: &FundamentalFunction, data: &DataSequence, x: f64, tol: f64) -> Result<f64> {
    l.interpolate_at(data, x, tol)
}

/// Growth declaration `|b_j| <= constant * (1 + |j|)^beta * e^{rate |j|}`.
///
/// `rate = 0` is the polynomial class `Y^beta`; a positive rate covers the
/// exponential solutions of the homogeneous equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub constant: f64,
    pub beta: f64,
    pub rate: f64,
}

impl Growth {
    pub fn polynomial(constant: f64, beta: f64) -> Self {
        Self {
            constant,
            beta,
            rate: 0.0,
        }
    }

    pub fn exponential(constant: f64, beta: f64, rate: f64) -> Self {
        Self { constant, beta, rate }
    }

    pub fn bound(&self, j: i64) -> f64 {
        let a = j.unsigned_abs() as f64;
        self.constant * (1.0 + a).powf(self.beta) * (self.rate * a).exp()
    }
}

/// What a finite table reports outside its explicit entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outside {
    /// Finitely supported data.
    Zero,
    /// Indices outside the table are an error.
    Missing,
}

type Rule = Arc<dyn Fn(i64) -> Option<f64> + Send + Sync>;

#[derive(Clone)]
enum Source {
    Table { values: BTreeMap<i64, f64>, outside: Outside },
    Rule(Rule),
}

/// Interpolation data `{b_j}` with a growth declaration.
#[derive(Clone)]
pub struct DataSequence {
    source: Source,
    growth: Growth,
}

impl fmt::Debug for DataSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("DataSequence");
        match &self.source {
            Source::Table { values, outside } => d.field("table", values).field("outside", outside),
            Source::Rule(_) => d.field("rule", &"<fn>"),
        };
        d.field("growth", &self.growth).finish()
    }
}

impl DataSequence {
    /// Explicit table; the growth is `max |b_j|` with `beta = 0`.
    pub fn from_table(values: BTreeMap<i64, f64>, outside: Outside) -> Self {
        let constant = values.values().fold(0.0, |m: f64, v| m.max(v.abs()));
        Self {
            source: Source::Table { values, outside },
            growth: Growth::polynomial(constant, 0.0),
        }
    }

    /// Data generated by a rule defined on every integer.
    pub fn from_fn<F>(growth: Growth, f: F) -> Self
    where
        F: Fn(i64) -> f64 + Send + Sync + 'static,
    {
        Self {
            source: Source::Rule(Arc::new(move |j| Some(f(j)))),
            growth,
        }
    }

    /// Data generated by a rule that may be undefined at some indices.
    pub fn from_partial_fn<F>(growth: Growth, f: F) -> Self
    where
        F: Fn(i64) -> Option<f64> + Send + Sync + 'static,
    {
        Self {
            source: Source::Rule(Arc::new(f)),
            growth,
        }
    }

    /// The Kronecker delta at the origin.
    pub fn delta() -> Self {
        Self::from_table(BTreeMap::from([(0, 1.0)]), Outside::Zero)
    }

    /// Replaces the growth declaration, checking it against every explicit
    /// table entry.
    pub fn with_growth(mut self, growth: Growth) -> Result<Self> {
        if let Source::Table { values, .. } = &self.source {
            for (&j, &v) in values {
                let bound = growth.bound(j);
                if v.abs() > bound {
                    return Err(SplineError::GrowthViolation { index: j, value: v.abs(), bound });
                }
            }
        }
        self.growth = growth;
        Ok(self)
    }

    pub fn growth(&self) -> &Growth {
        &self.growth
    }

    pub fn value(&self, j: i64) -> Result<f64> {
        match &self.source {
            Source::Table { values, outside } => match (values.get(&j), outside) {
                (Some(v), _) => Ok(*v),
                (None, Outside::Zero) => Ok(0.0),
                (None, Outside::Missing) => Err(SplineError::MissingData(j)),
            },
            Source::Rule(f) => f(j).ok_or(SplineError::MissingData(j)),
        }
    }

    /// Explicit `(j, b_j)` entries of a table source.
    pub fn entries(&self) -> Option<&BTreeMap<i64, f64>> {
        match &self.source {
            Source::Table { values, .. } => Some(values),
            Source::Rule(_) => None,
        }
    }

    /// Reads a two-column CSV (`j,b_j`, header row required); absent indices
    /// are zero.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut values = BTreeMap::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| SplineError::MalformedData(e.to_string()))?;
            let row = line + 2;
            if rec.len() != 2 {
                return Err(SplineError::MalformedData(format!("row {row}: expected 2 columns, got {}", rec.len())));
            }
            let j: i64 = rec[0]
                .parse()
                .map_err(|_| SplineError::MalformedData(format!("row {row}: index `{}` is not an integer", &rec[0])))?;
            let b: f64 = rec[1]
                .parse()
                .map_err(|_| SplineError::MalformedData(format!("row {row}: value `{}` is not a number", &rec[1])))?;
            if !b.is_finite() {
                return Err(SplineError::MalformedData(format!("row {row}: value is not finite")));
            }
            if values.insert(j, b).is_some() {
                return Err(SplineError::MalformedData(format!("row {row}: duplicate index {j}")));
            }
        }
        Ok(Self::from_table(values, Outside::Zero))
    }
}

/// Solutions `x^m e^{+-alpha x}`, `cosh(alpha x)`, `sinh(alpha x)` of the
/// homogeneous equation, which cardinal interpolation reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Cosh,
    Sinh,
    /// `x^power e^{sign alpha x}`.
    ExpPoly { power: usize, positive: bool },
}

impl Basis {
    /// Parses `cosh`, `sinh`, `exp+`, `exp-`, `xexp+`, `xexp-`, `x2exp+`, ...
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "cosh" => return Ok(Basis::Cosh),
            "sinh" => return Ok(Basis::Sinh),
            _ => {}
        }
        let bad = || SplineError::InvalidArgument(format!("unknown basis `{name}`"));
        let (head, positive) = if let Some(h) = name.strip_suffix("exp+") {
            (h, true)
        } else if let Some(h) = name.strip_suffix("exp-") {
            (h, false)
        } else {
            return Err(bad());
        };
        let power = match head {
            "" => 0,
            "x" => 1,
            _ => head
                .strip_prefix('x')
                .and_then(|p| p.parse::<usize>().ok())
                .filter(|p| *p >= 2)
                .ok_or_else(bad)?,
        };
        Ok(Basis::ExpPoly { power, positive })
    }

    pub fn name(&self) -> String {
        match self {
            Basis::Cosh => "cosh".into(),
            Basis::Sinh => "sinh".into(),
            Basis::ExpPoly { power, positive } => {
                let s = if *positive { '+' } else { '-' };
                match power {
                    0 => format!("exp{s}"),
                    1 => format!("xexp{s}"),
                    p => format!("x{p}exp{s}"),
                }
            }
        }
    }

    /// Power of `x` in the basis element.
    pub fn power(&self) -> usize {
        match self {
            Basis::Cosh | Basis::Sinh => 0,
            Basis::ExpPoly { power, .. } => *power,
        }
    }

    pub fn eval(&self, alpha: f64, x: f64) -> f64 {
        match self {
            Basis::Cosh => (alpha * x).cosh(),
            Basis::Sinh => (alpha * x).sinh(),
            Basis::ExpPoly { power, positive } => {
                let s = if *positive { 1.0 } else { -1.0 };
                x.powi(*power as i32) * (s * alpha * x).exp()
            }
        }
    }

    pub fn growth(&self, alpha: f64) -> Growth {
        Growth::exponential(1.0, self.power() as f64, alpha)
    }

    /// Samples at the integers with the matching growth declaration.
    /// Rejects elements outside the span for order `k` (`power >= k`).
    pub fn samples(&self, params: SplineParams) -> Result<DataSequence> {
        if self.power() >= params.k() {
            return Err(SplineError::InvalidArgument(format!(
                "basis `{}` has power {} >= k = {}; it is not annihilated by the operator",
                self.name(),
                self.power(),
                params.k()
            )));
        }
        let basis = *self;
        let alpha = params.alpha();
        Ok(DataSequence::from_fn(self.growth(alpha), move |j| basis.eval(alpha, j as f64)))
    }
}

/// Independent evaluation of `L_k` from its Fourier transform,
/// `L_k(x) = (2 pi)^{-1} sum_l \int_{-pi}^{pi} E_k^(xi - 2 pi l) sigma(xi) cos(x (xi - 2 pi l)) dxi`.
///
/// The replica sum over `l` is truncated at `L` and completed with an
/// asymptotic tail in powers of `1/l`.
#[derive(Debug, Clone)]
pub struct SpectralOracle {
    params: SplineParams,
    /// `(xi, w * sigma(xi))` on a composite Gauss rule over `[-pi, pi]`.
    nodes: Vec<(f64, f64)>,
    replicas: usize,
}

impl SpectralOracle {
    pub fn new(params: SplineParams, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(SplineError::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
        }
        let rule = CompositeGauss::new(16);
        let nodes = rule
            .nodes(-PI, PI, 24)
            .into_iter()
            .map(|(xi, w)| Ok((xi, w * reciprocal_symbol(params, xi, 1e-15)?)))
            .collect::<Result<Vec<_>>>()?;
        let order = 2 * params.k() + 1;
        let replicas = ((1e-2 / tol).powf(1.0 / order as f64).ceil() as usize).clamp(64, 4096);
        Ok(Self { params, nodes, replicas })
    }

    pub fn replicas(&self) -> usize {
        self.replicas
    }

    /// `h(l) = sum_i w_i sigma_i E_k^(xi_i - 2 pi l) e^{i x xi_i}` as (re, im).
    fn shifted_moment(&self, ell: usize, x: f64) -> (f64, f64) {
        let shift = TAU * ell as f64;
        self.nodes.iter().fold((0.0, 0.0), |(re, im), &(xi, ws)| {
            let e = ws * eval_green_hat(self.params, xi - shift);
            (re + e * (x * xi).cos(), im + e * (x * xi).sin())
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.replicas;
        let mut sum = 0.0;
        for ell in (1..=n).rev() {
            let shift = TAU * ell as f64;
            let t: f64 = self
                .nodes
                .iter()
                .map(|&(xi, ws)| ws * eval_green_hat(self.params, xi - shift) * (x * (xi - shift)).cos())
                .sum();
            sum += 2.0 * t;
        }
        let t0: f64 = self
            .nodes
            .iter()
            .map(|&(xi, ws)| ws * eval_green_hat(self.params, xi) * (x * xi).cos())
            .sum();
        (sum + t0 + 2.0 * self.tail(x)) / TAU
    }

    /// `Re sum_{l > L} z^l h(l)` with `z = e^{-2 pi i x}` and
    /// `h(l) l^{2k} ~ a_0 + a_1 / l + a_2 / l^2` fitted at `l = L-2, L-1, L`.
    fn tail(&self, x: f64) -> f64 {
        let n = self.replicas;
        let s = 2 * self.params.k();
        let ls = [n - 2, n - 1, n];
        let scaled: Vec<(f64, f64)> = ls
            .iter()
            .map(|&l| {
                let (re, im) = self.shifted_moment(l, x);
                let f = (l as f64).powi(s as i32);
                (re * f, im * f)
            })
            .collect();
        // quadratic in u = 1/l through the three points
        let us: Vec<f64> = ls.iter().map(|&l| 1.0 / l as f64).collect();
        let fit = |vals: [f64; 3]| -> [f64; 3] {
            let (u0, u1, u2) = (us[0], us[1], us[2]);
            let d01 = (vals[1] - vals[0]) / (u1 - u0);
            let d12 = (vals[2] - vals[1]) / (u2 - u1);
            let a2 = (d12 - d01) / (u2 - u0);
            let a1 = d01 - a2 * (u0 + u1);
            let a0 = vals[0] - a1 * u0 - a2 * u0 * u0;
            [a0, a1, a2]
        };
        let re = fit([scaled[0].0, scaled[1].0, scaled[2].0]);
        let im = fit([scaled[0].1, scaled[1].1, scaled[2].1]);
        let theta = crate::spectral_symbol::reduce_angle(-TAU * x);
        let mut total = 0.0;
        for i in 0..3 {
            let (zr, zi) = lerch_tail(theta, s + i, n);
            total += re[i] * zr - im[i] * zi;
        }
        total
    }
}

/// `sum_{l > n} e^{i theta l} l^{-s}` as (re, im), `s >= 2`.
fn lerch_tail(theta: f64, s: usize, n: usize) -> (f64, f64) {
    let sf = s as f64;
    let f = |l: f64| l.powi(-(s as i32));
    let gap = 2.0 * (theta / 2.0).sin().abs();
    if gap < 1e-12 {
        let head = 64;
        let mut sum = 0.0;
        for l in (n + 1..=n + head).rev() {
            sum += f(l as f64);
        }
        let a = (n + head) as f64 + 0.5;
        let tail = a.powf(1.0 - sf) / (sf - 1.0) - sf * a.powf(-sf - 1.0) / 24.0;
        return (sum + tail, 0.0);
    }
    let end = ((sf * sf / (gap.powi(3) * 1e-17)).powf(1.0 / (sf + 2.0)) as usize).clamp(n + 64, 50_000_000);
    let (mut re, mut im) = (0.0, 0.0);
    for l in (n + 1..=end).rev() {
        let v = f(l as f64);
        let ang = theta * l as f64;
        re += v * ang.cos();
        im += v * ang.sin();
    }
    // summation by parts for the remainder past `end`
    let next = (end + 1) as f64;
    let (zr, zi) = (theta.cos(), theta.sin());
    let (dr, di) = (1.0 - zr, -zi);
    let den = dr * dr + di * di;
    let (qr, qi) = (dr / den, -di / den); // 1 / (1 - z)
    let zq = (zr * qr - zi * qi, zr * qi + zi * qr);
    let diff = f(next + 1.0) - f(next);
    let inner = (f(next) + zq.0 * diff, zq.1 * diff);
    let ang = theta * next;
    let zn = (ang.cos(), ang.sin());
    let lead = (zn.0 * qr - zn.1 * qi, zn.0 * qi + zn.1 * qr);
    re += lead.0 * inner.0 - lead.1 * inner.1;
    im += lead.0 * inner.1 + lead.1 * inner.0;
    (re, im)
}

/// `L_k(x)` by inverse Fourier transform of `L_k^`; the arbiter for the
/// normalisation of the spatial representation.
pub fn eval_fundamental_spectral(params: SplineParams, x: f64, tol: f64) -> Result<f64> {
    Ok(SpectralOracle::new(params, tol)?.eval(x))
}
