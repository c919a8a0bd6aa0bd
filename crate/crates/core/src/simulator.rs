//! Discrete-event Monte Carlo oracle for the alternating-standby system.
//!
//! The event loop follows the operational model directly: server 1 works
//! first (after relabeling) with no repair pending, and at every failure the
//! standby takes over while the failed server draws a repair time. The
//! system dies at the end of the first work period whose paired repair did
//! not finish strictly earlier — a repair completing exactly at the failure
//! instant counts as death. Lifetime is the total accumulated work time.
//!
//! Replication `i` draws from the counter-based substream `(seed, i)`, so
//! results are bit-identical across serial and parallel execution, and
//! aggregation uses compensated summation in index order.

use rayon::prelude::*;

use crate::error::Error;
use crate::model::SystemModel;
use crate::rng::{substream, SplitMix64};
use crate::Result;

/// Outcome of a single simulated system history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationOutcome {
    /// Accumulated work time at death, or at the cycle cap when censored.
    pub lifetime: f64,
    /// Completed work periods.
    pub cycles: u64,
    /// True when the cap was reached without observing system failure.
    pub censored: bool,
}

/// Whether replications run on the current thread or a rayon pool. Both
/// yield bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Summary statistics over lifetimes of independent replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSummary {
    pub n: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub censored_count: u64,
}

impl SimulationSummary {
    /// "exact" when no replication hit the cycle cap, else "censored".
    pub fn label(&self) -> &'static str {
        if self.censored_count == 0 {
            "exact"
        } else {
            "censored"
        }
    }
}

/// Survival estimate at one grid time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalEstimate {
    pub t: f64,
    pub fraction: f64,
    pub std_error: f64,
    /// Set when censored replications make the fraction at this `t`
    /// ambiguous (some histories ended unresolved at or before `t`).
    pub horizon_exceeded: bool,
}

/// Simulates one system history.
pub fn simulate_lifetime(
    model: &SystemModel,
    rng: &mut SplitMix64,
    max_cycles: u64,
) -> ReplicationOutcome {
    debug_assert!(max_cycles >= 1);
    let m = model.normalized();
    let work = [&m.work1, &m.work2];
    let repair = [&m.repair1, &m.repair2];

    // first period: the starting server works, nothing is under repair
    let mut worker = 0usize;
    let mut total = work[worker].sample(rng);
    let mut cycles: u64 = 1;

    while cycles < max_cycles {
        // the worker fails; the standby takes over, the failed one repairs
        let eta = repair[worker].sample(rng);
        let next = 1 - worker;
        let zeta = work[next].sample(rng);
        total += zeta;
        cycles += 1;
        if eta >= zeta {
            // repair not finished (ties fail): system death
            return ReplicationOutcome {
                lifetime: total,
                cycles,
                censored: false,
            };
        }
        worker = next;
    }

    ReplicationOutcome {
        lifetime: total,
        cycles,
        censored: true,
    }
}

/// Runs `n` independent replications on deterministic substreams.
pub fn run_replications(
    model: &SystemModel,
    n: u64,
    seed: u64,
    max_cycles: u64,
    exec: Execution,
) -> Vec<ReplicationOutcome> {
    let one = |i: u64| {
        let mut rng = substream(seed, i);
        simulate_lifetime(model, &mut rng, max_cycles)
    };
    match exec {
        Execution::Serial => (0..n).map(one).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(one).collect(),
    }
}

/// Neumaier compensated sum, evaluated in index order so the result does not
/// depend on how the values were produced.
fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_n(n: u64) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "need at least 2 replications, got {n}"
        )))
    }
}

/// Summary statistics of already-run replications.
pub fn summarize(outcomes: &[ReplicationOutcome], seed: u64) -> SimulationSummary {
    let n = outcomes.len() as u64;
    let nf = n as f64;
    let mean = compensated_sum(outcomes.iter().map(|o| o.lifetime)) / nf;
    let ss = compensated_sum(outcomes.iter().map(|o| {
        let d = o.lifetime - mean;
        d * d
    }));
    let variance = ss / (nf - 1.0);
    let std_error = (variance / nf).sqrt();
    SimulationSummary {
        n,
        seed,
        mean,
        variance,
        std_error,
        ci95: (mean - 1.96 * std_error, mean + 1.96 * std_error),
        censored_count: outcomes.iter().filter(|o| o.censored).count() as u64,
    }
}

/// Mean lifetime over `n` replications.
pub fn estimate_mean(
    model: &SystemModel,
    n: u64,
    seed: u64,
    max_cycles: u64,
) -> Result<SimulationSummary> {
    check_n(n)?;
    let outcomes = run_replications(model, n, seed, max_cycles, Execution::Parallel);
    Ok(summarize(&outcomes, seed))
}

/// Sample mean and standard error of `e^{-s * lifetime}` from already-run
/// replications. Censored histories contribute `e^{-s * lifetime_so_far}`,
/// an upper bias guard, and are counted.
pub fn lst_from(outcomes: &[ReplicationOutcome], s: f64) -> (f64, f64) {
    let nf = outcomes.len() as f64;
    let mean = compensated_sum(outcomes.iter().map(|o| (-s * o.lifetime).exp())) / nf;
    let ss = compensated_sum(outcomes.iter().map(|o| {
        let d = (-s * o.lifetime).exp() - mean;
        d * d
    }));
    (mean, (ss / (nf - 1.0) / nf).sqrt())
}

/// Direct Monte Carlo estimate of `E e^{-s tau}`.
pub fn estimate_lst(
    model: &SystemModel,
    s: f64,
    n: u64,
    seed: u64,
    max_cycles: u64,
) -> Result<(f64, f64)> {
    check_n(n)?;
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "transform estimate needs s > 0, got {s}"
        )));
    }
    let outcomes = run_replications(model, n, seed, max_cycles, Execution::Parallel);
    Ok(lst_from(&outcomes, s))
}

/// Empirical survival fractions at the grid `ts` from already-run
/// replications, with binomial standard errors.
pub fn survival_from(outcomes: &[ReplicationOutcome], ts: &[f64]) -> Vec<SurvivalEstimate> {
    let nf = outcomes.len() as f64;
    ts.iter()
        .map(|&t| {
            let alive = outcomes.iter().filter(|o| o.lifetime > t).count() as f64;
            let ambiguous = outcomes.iter().any(|o| o.censored && o.lifetime <= t);
            let fraction = alive / nf;
            SurvivalEstimate {
                t,
                fraction,
                std_error: (fraction * (1.0 - fraction) / nf).sqrt(),
                horizon_exceeded: ambiguous,
            }
        })
        .collect()
}

/// Empirical survival over `n` replications.
pub fn estimate_survival(
    model: &SystemModel,
    ts: &[f64],
    n: u64,
    seed: u64,
    max_cycles: u64,
) -> Result<Vec<SurvivalEstimate>> {
    check_n(n)?;
    let outcomes = run_replications(model, n, seed, max_cycles, Execution::Parallel);
    Ok(survival_from(&outcomes, ts))
}
