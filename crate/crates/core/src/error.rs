//! Error type shared by all analysis routes.

use thiserror::Error;

/// Failures surfaced by model construction and the numeric pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Distribution parameters violate their positivity/ordering constraints.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A caller-supplied argument is outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The cycle-continuation product at s = 0 is at or above 1 - 1e-12:
    /// the system never fails and the lifetime is not a proper random
    /// variable.
    #[error("non-terminating system: phi1(0)*phi2(0) = {product} >= 1 - 1e-12")]
    NonTerminating { product: f64 },

    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance. Carries the best estimate obtained.
    #[error("quadrature did not converge: best estimate {estimate} +/- {abs_error}")]
    QuadratureNoConverge { estimate: f64, abs_error: f64 },

    /// The contraction iteration for the fixed-point solve hit its iteration
    /// budget (contraction factor too close to 1).
    #[error("fixed-point iteration exhausted {iterations} iterations without converging")]
    FixedPointNoConverge { iterations: u64 },

    /// Elimination and contraction-iteration solutions of the fixed-point
    /// system disagree beyond tolerance.
    #[error("fixed-point self-check failed: elimination {elimination} vs iteration {iteration}")]
    FixedPointMismatch { elimination: f64, iteration: f64 },

    /// Richardson extrapolation of the moment finite differences failed to
    /// stabilize to six significant digits.
    #[error("moment diverged: extrapolation did not stabilize (best {best})")]
    MomentDiverged { best: f64 },

    /// The two Gaver–Stehfest orders disagree by more than the instability
    /// threshold, typically near a discontinuity of the survival function.
    #[error("inversion unstable at t = {t}: order-16/order-12 discrepancy {discrepancy}")]
    InversionUnstable { t: f64, discrepancy: f64 },

    /// Quantile bracketing failed to enclose the target probability.
    #[error("quantile bracket not found after {doublings} doublings")]
    BracketNotFound { doublings: u32 },
}
