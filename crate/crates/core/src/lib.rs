//! Lifetime analysis of a two-server alternating-standby repairable system.
//!
//! One server works while the other is idle or under repair. When the working
//! server fails, the standby takes over immediately and the failed one enters
//! repair; the system dies the first time a working server fails before its
//! partner's repair has finished (a repair finishing exactly at the failure
//! instant counts as death). The crate computes the distribution of the total
//! accumulated working time by four mutually checking routes:
//!
//! * [`transform`] — the Laplace–Stieltjes transform of the lifetime in closed
//!   form, by a 2x2 fixed-point solve, and as a truncated scenario series,
//!   plus moments extracted at the origin.
//! * [`inversion`] — survival curves and quantiles via Gaver–Stehfest
//!   numerical inversion of the transform.
//! * [`simulator`] — a seed-deterministic Monte Carlo event loop used as an
//!   independent statistical oracle.
//! * [`distributions`] — the parametric work/repair time families everything
//!   above is built on.

pub mod distributions;
pub mod error;
pub mod inversion;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod simulator;
pub mod transform;

pub use distributions::DistributionSpec;
pub use error::Error;
pub use model::{ServerId, SystemModel};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
