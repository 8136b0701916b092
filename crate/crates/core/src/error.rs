use thiserror::Error;

/// Errors produced anywhere in the coefficient / forecast / planning pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("potential has no nonzero coefficient")]
    EmptyPotential,
    #[error("scale s must be positive, got {0}")]
    NonpositiveScale(String),
    #[error("indicial roots out of order: nu_plus = {nu_plus} < nu_minus = {nu_minus}")]
    RootOrdering { nu_plus: String, nu_minus: String },
    #[error("invalid number {0:?}")]
    InvalidNumber(String),
    #[error("invalid ODE description: {0}")]
    InvalidSpec(String),

    #[error("indicial roots are resonant: the series on this branch needs a logarithmic term at m = {m}")]
    ResonantIndicialRoots { m: u64 },
    #[error("working precision of {0} decimal digits is below the minimum of 15")]
    PrecisionTooLow(usize),
    #[error("evaluation point must be positive")]
    NonpositiveArgument,
    #[error("series did not reach the stopping criterion within {cap} terms")]
    NoConvergenceWithinCap { cap: u64 },

    #[error("turning point on the integration ray at t = {re} + {im}i")]
    TurningPointOnRay { re: f64, im: f64 },
    #[error("adaptive quadrature failed to converge on the ray at angle {phi}")]
    QuadratureFailure { phi: f64 },
    #[error("WKB evaluation failed at u = {u}, phi = {phi}: {source}")]
    PhaseScan {
        u: f64,
        phi: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("profile has {0} points, at least 8 are needed")]
    ProfileTooSmall(usize),
    #[error("growth profile is not convex at u = {u} (second derivative {second})")]
    NonconvexProfile { u: f64, second: f64 },
    #[error("index {m} is outside the estimated range [{lo}, {hi}]")]
    OutOfRange { m: f64, lo: f64, hi: f64 },

    #[error("index must be positive, got {0}")]
    NonpositiveIndex(f64),
    #[error("coefficient estimate covers m up to {covered}, but m = {needed} is required")]
    EstimateRangeExceeded { covered: f64, needed: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
