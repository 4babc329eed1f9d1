use thiserror::Error;

/// Errors raised while building or evaluating cardinal splines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplineError {
    #[error("alpha must be finite and > 0, got {0}")]
    InvalidAlpha(f64),

    #[error("order k must satisfy 1 <= k <= {max}, got {k}")]
    InvalidOrder { k: usize, max: usize },

    #[error("tolerance {tol:e} outside the admissible range [{min:e}, {max:e}]")]
    InvalidTolerance { tol: f64, min: f64, max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tolerance {tol:e} unreachable: best achievable is {achieved:e}")]
    ToleranceUnreachable { tol: f64, achieved: f64 },

    #[error("trapezoid sampling did not converge within {samples} samples")]
    NonConvergence { samples: usize },

    #[error("degenerate decay fit: only {nonzero} nonzero coefficients (compact support)")]
    DegenerateFit { nonzero: usize },

    #[error("interpolation window would exceed {max} lattice points")]
    WindowOverflow { max: usize },

    #[error("series diverges: data growth rate {growth} >= decay rate {decay} of the fundamental function")]
    DivergentSeries { growth: f64, decay: f64 },

    #[error("data sequence has no value at index {0}")]
    MissingData(i64),

    #[error("data value at index {0} is not finite")]
    NonFiniteData(i64),

    #[error("growth declaration violated at j = {index}: |b_j| = {value:e} > {bound:e}")]
    GrowthViolation { index: i64, value: f64, bound: f64 },

    #[error("cardinality defect {defect:e} exceeds {limit:e}; parameters are too ill-conditioned")]
    IllConditioned { defect: f64, limit: f64 },

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error("malformed data: {0}")]
    MalformedData(String),
}

pub type Result<T, E = SplineError> = std::result::Result<T, E>;
