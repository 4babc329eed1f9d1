//! Polyhyperbolic cardinal splines.
//!
//! The fundamental function of cardinal interpolation `L_k` for the operator
//! `(D^2 - alpha^2)^k` on the integer lattice, interpolation of sequences of
//! polynomial growth, and the spectral error analysis of interpolating
//! band-limited functions as the order `k` grows.

pub mod bandlimited_analysis;
pub mod cardinal_interpolation;
mod dd;
pub mod error;
pub mod exp_bspline;
pub mod format;
pub mod greens_kernel;
pub mod quadrature;
pub mod spectral_symbol;

pub use bandlimited_analysis::{
    aliasing_envelope, error_report, l2_error_bound, l2_error_spectral, sample_integers, sup_error_bound,
    sup_error_grid, target_gallery, BandlimitedTarget, ErrorReport, SampledTarget, TargetKind,
};
pub use cardinal_interpolation::{
    build_fundamental, eval_fundamental, eval_fundamental_spectral, interpolate_at, select_window, Basis,
    DataSequence, FundamentalFunction, Growth, Outside, SpectralOracle,
};
pub use error::{Result, SplineError};
pub use exp_bspline::ExpBSpline;
pub use greens_kernel::{
    build_green_kernel, eval_green, eval_green_hat, GreenKernel, SplineParams, FRAC_1_SQRT_2PI, K_MAX,
};
pub use spectral_symbol::{
    alias_ratio, compute_coefficients, decay_estimate, fundamental_hat, periodized_green_hat,
    reciprocal_symbol, CoefficientTable, DecayFit,
};
