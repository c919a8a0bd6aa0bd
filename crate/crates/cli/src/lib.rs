//! Library side of the `duo-standby` CLI: config parsing, typed reports,
//! and command dispatch. The binary in `main.rs` is a thin wrapper mapping
//! results onto exit codes.

pub mod config;
pub mod report;
pub mod run;

use duo_standby_core::Error as CoreError;

/// Stable category string for the structured error record emitted on
/// exit code 3.
pub fn error_category(err: &CoreError) -> &'static str {
    match err {
        CoreError::NonTerminating { .. } => "non-terminating system",
        CoreError::InversionUnstable { .. } => "inversion unstable",
        CoreError::QuadratureNoConverge { .. } => "quadrature non-convergence",
        CoreError::MomentDiverged { .. } => "moment diverged",
        CoreError::BracketNotFound { .. } => "bracket not found",
        CoreError::FixedPointNoConverge { .. } | CoreError::FixedPointMismatch { .. } => {
            "fixed-point failure"
        }
        CoreError::InvalidDistribution(_) | CoreError::InvalidArgument(_) => "invalid argument",
    }
}

/// JSON error record written to stderr when a model/numeric error aborts a
/// run.
pub fn error_record(err: &CoreError) -> String {
    serde_json::json!({
        "error": error_category(err),
        "message": err.to_string(),
    })
    .to_string()
}
