//! Transforms of the system lifetime.
//!
//! The building blocks are the work-period kernels
//!
//! * `f_i(s) = E e^{-s Z_i}` — the transform of server i's work time, and
//! * `phi_i(s) = E e^{-s Z_i} 1{Z_i > H_j}` — the same expectation restricted
//!   to the event that the other server's repair `H_j` finished strictly
//!   within the work period (`j` is the other server; a tie counts as system
//!   failure, so the repair CDF enters through its left limit),
//!
//! from which the lifetime transform `L(s) = E e^{-s tau}` is computed by
//! three mutually checking routes: the closed-form ratio
//! `f1 (f2 - phi2 + phi2 (f1 - phi1)) / (1 - phi1 phi2)`, the solution of the
//! 2x2 linear fixed-point system for the residual-lifetime transforms
//! `g12, g21`, and a truncated series over failure scenarios whose tail is a
//! geometric bound. `phi1(0) phi2(0)` is the cycle-continuation probability;
//! when it reaches 1 the system never fails and `tau` is not a proper random
//! variable.

mod moments;

pub use moments::moment;

use crate::distributions::DistributionSpec;
use crate::error::Error;
use crate::model::{ServerId, SystemModel};
use crate::quadrature::integrate_df;
use crate::Result;

/// How a transform value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    FixedPoint,
    ScenarioSum,
    Quadrature,
}

/// A transform value at one argument `s`, with an absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct TransformResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

/// Solution of the residual-lifetime fixed-point system
/// `g12 = (f1 - phi1) + phi1 g21`, `g21 = (f2 - phi2) + phi2 g12`,
/// with the system transform `L = f1 g21`.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointSolution {
    pub g12: f64,
    pub g21: f64,
    pub system_lst: f64,
}

/// Relative target for kernel quadrature.
const QUAD_REL_TOL: f64 = 1e-10;
/// Error attributed to closed-form kernel evaluations (a few ulps).
const CLOSED_ERR: f64 = 4.0 * f64::EPSILON;
/// `1 - phi1(0) phi2(0)` below this margin counts as a never-failing system.
pub(crate) const NON_TERMINATION_MARGIN: f64 = 1e-12;

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "transform argument must be finite and >= 0, got {s}"
        )))
    }
}

fn unit_clamp(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `f_i(s)`: transform of server i's work-time distribution. Closed form
/// where the family has one, adaptive quadrature otherwise.
pub fn work_lst(model: &SystemModel, server: ServerId, s: f64) -> Result<TransformResult> {
    check_s(s)?;
    work_kernel(model.work(server), s)
}

/// `phi_i(s)`: transform of a work period restricted to the other server's
/// repair finishing strictly in time.
pub fn phi(model: &SystemModel, server: ServerId, s: f64) -> Result<TransformResult> {
    check_s(s)?;
    phi_kernel(model.work(server), model.repair(server.other()), s)
}

/// Same as [`phi`] but always down the numeric path, bypassing the
/// exponential/exponential closed form. Exists so the two routes can be
/// cross-checked.
pub fn phi_via_quadrature(model: &SystemModel, server: ServerId, s: f64) -> Result<TransformResult> {
    check_s(s)?;
    phi_quadrature_kernel(model.work(server), model.repair(server.other()), s)
}

fn work_kernel(work: &DistributionSpec, s: f64) -> Result<TransformResult> {
    if let Some(value) = work.closed_lst(s) {
        return Ok(TransformResult {
            value,
            abs_error_estimate: CLOSED_ERR,
            method: Method::Closed,
        });
    }
    let out = integrate_df(work, |x| (-s * x).exp(), &[], QUAD_REL_TOL)?;
    Ok(TransformResult {
        value: unit_clamp(out.value),
        abs_error_estimate: out.abs_error,
        method: Method::Quadrature,
    })
}

fn phi_kernel(
    work: &DistributionSpec,
    repair: &DistributionSpec,
    s: f64,
) -> Result<TransformResult> {
    if let (
        DistributionSpec::Exponential { rate: lambda },
        DistributionSpec::Exponential { rate: mu },
    ) = (work, repair)
    {
        let value = lambda / (lambda + s) - lambda / (lambda + mu + s);
        return Ok(TransformResult {
            value,
            abs_error_estimate: CLOSED_ERR,
            method: Method::Closed,
        });
    }
    phi_quadrature_kernel(work, repair, s)
}

fn phi_quadrature_kernel(
    work: &DistributionSpec,
    repair: &DistributionSpec,
    s: f64,
) -> Result<TransformResult> {
    // Seed panel edges where the integrand jumps (repair atom) or kinks
    // (uniform support edges).
    let mut breaks = Vec::new();
    if let Some((a, _)) = repair.atom() {
        breaks.push(a);
    }
    if let DistributionSpec::Uniform { lo, hi } = *repair {
        breaks.push(lo);
        breaks.push(hi);
    }
    if let DistributionSpec::Uniform { lo, hi } = *work {
        breaks.push(lo);
        breaks.push(hi);
    }
    let out = integrate_df(
        work,
        |x| (-s * x).exp() * repair.cdf_left(x),
        &breaks,
        QUAD_REL_TOL,
    )?;
    Ok(TransformResult {
        value: unit_clamp(out.value),
        abs_error_estimate: out.abs_error,
        method: Method::Quadrature,
    })
}

/// All four kernels at one argument, for a normalized model.
pub(crate) struct Kernels {
    pub f1: TransformResult,
    pub f2: TransformResult,
    pub phi1: TransformResult,
    pub phi2: TransformResult,
}

pub(crate) fn kernels(norm: &SystemModel, s: f64) -> Result<Kernels> {
    Ok(Kernels {
        f1: work_kernel(&norm.work1, s)?,
        f2: work_kernel(&norm.work2, s)?,
        phi1: phi_kernel(&norm.work1, &norm.repair2, s)?,
        phi2: phi_kernel(&norm.work2, &norm.repair1, s)?,
    })
}

/// Cycle-continuation probability `phi1(0) phi2(0)`; errors if the system
/// never fails (product at or above `1 - 1e-12`).
pub(crate) fn check_proper(norm: &SystemModel) -> Result<f64> {
    let p1 = phi_kernel(&norm.work1, &norm.repair2, 0.0)?;
    let p2 = phi_kernel(&norm.work2, &norm.repair1, 0.0)?;
    let product = p1.value * p2.value;
    if product >= 1.0 - NON_TERMINATION_MARGIN {
        Err(Error::NonTerminating { product })
    } else {
        Ok(product)
    }
}

/// First-order sensitivity of the closed form to kernel perturbations.
fn propagate_closed(k: &Kernels) -> f64 {
    let (f1, f2, p1, p2) = (k.f1.value, k.f2.value, k.phi1.value, k.phi2.value);
    let denom = 1.0 - p1 * p2;
    let num = f2 - p2 + p2 * (f1 - p1);
    let d_f1 = (num + f1 * p2) / denom;
    let d_f2 = f1 / denom;
    let d_p1 = f1 * p2 * (num - denom) / (denom * denom);
    let d_p2 = f1 * ((f1 - p1 - 1.0) * denom + num * p1) / (denom * denom);
    d_f1.abs() * k.f1.abs_error_estimate
        + d_f2.abs() * k.f2.abs_error_estimate
        + d_p1.abs() * k.phi1.abs_error_estimate
        + d_p2.abs() * k.phi2.abs_error_estimate
}

/// `L(s)` by the closed-form ratio
/// `f1 (f2 - phi2 + phi2 (f1 - phi1)) / (1 - phi1 phi2)`.
pub fn system_lst_closed(model: &SystemModel, s: f64) -> Result<TransformResult> {
    check_s(s)?;
    let norm = model.normalized();
    let k = kernels(&norm, s)?;
    closed_from_kernels(&k, s)
}

pub(crate) fn closed_from_kernels(k: &Kernels, s: f64) -> Result<TransformResult> {
    let (f1, f2, p1, p2) = (k.f1.value, k.f2.value, k.phi1.value, k.phi2.value);
    let product = p1 * p2;
    let denom = 1.0 - product;
    if (s == 0.0 && denom <= NON_TERMINATION_MARGIN) || denom <= 0.0 {
        return Err(Error::NonTerminating { product });
    }
    let value = f1 * (f2 - p2 + p2 * (f1 - p1)) / denom;
    Ok(TransformResult {
        value: unit_clamp(value),
        abs_error_estimate: propagate_closed(k) + 8.0 * f64::EPSILON / denom,
        method: Method::Closed,
    })
}

const FIXED_POINT_TOL: f64 = 1e-14;
const FIXED_POINT_MAX_ITERS: u64 = 20_000_000;

/// `L(s)` through the residual-lifetime fixed point, solved both by direct
/// elimination and by iterating the contraction from zero; the two routes
/// must agree.
pub fn system_lst_fixed_point(model: &SystemModel, s: f64) -> Result<FixedPointSolution> {
    check_s(s)?;
    let norm = model.normalized();
    let k = kernels(&norm, s)?;
    let (f1, f2, p1, p2) = (k.f1.value, k.f2.value, k.phi1.value, k.phi2.value);
    let product = p1 * p2;
    let denom = 1.0 - product;
    if (s == 0.0 && denom <= NON_TERMINATION_MARGIN) || denom <= 0.0 {
        return Err(Error::NonTerminating { product });
    }

    let g12_elim = (f1 - p1 + p1 * (f2 - p2)) / denom;
    let g21_elim = (f2 - p2 + p2 * (f1 - p1)) / denom;

    let (mut g12, mut g21) = (0.0f64, 0.0f64);
    let mut iters: u64 = 0;
    loop {
        let n12 = (f1 - p1) + p1 * g21;
        let n21 = (f2 - p2) + p2 * g12;
        let delta = (n12 - g12).abs().max((n21 - g21).abs());
        g12 = n12;
        g21 = n21;
        iters += 1;
        if delta < FIXED_POINT_TOL {
            break;
        }
        if iters >= FIXED_POINT_MAX_ITERS {
            return Err(Error::FixedPointNoConverge { iterations: iters });
        }
    }

    let tol = 1e-12f64.max(3e-14 / denom);
    if (g12 - g12_elim).abs() > tol {
        return Err(Error::FixedPointMismatch {
            elimination: g12_elim,
            iteration: g12,
        });
    }
    if (g21 - g21_elim).abs() > tol {
        return Err(Error::FixedPointMismatch {
            elimination: g21_elim,
            iteration: g21,
        });
    }

    Ok(FixedPointSolution {
        g12: unit_clamp(g12_elim),
        g21: unit_clamp(g21_elim),
        system_lst: unit_clamp(f1 * g21_elim),
    })
}

/// Partial sum of the failure-scenario series up to cycle `max_cycles`.
///
/// Each completed failure cycle contributes a factor `phi1 phi2`; the sum of
/// the first K cycles is `A (1 + r + ... + r^{K-1})` with
/// `A = f1 (f2 - phi2) + f1 phi2 (f1 - phi1)` and `r = phi1 phi2`, and the
/// discarded tail is bounded by `A r^K / (1 - r)`, reported through
/// `abs_error_estimate` together with the propagated kernel error.
pub fn system_lst_scenario_sum(
    model: &SystemModel,
    s: f64,
    max_cycles: u32,
) -> Result<TransformResult> {
    check_s(s)?;
    if max_cycles == 0 {
        return Err(Error::InvalidArgument(
            "scenario sum needs at least one cycle".into(),
        ));
    }
    let norm = model.normalized();
    let k = kernels(&norm, s)?;
    let (f1, f2, p1, p2) = (k.f1.value, k.f2.value, k.phi1.value, k.phi2.value);
    let a = f1 * (f2 - p2) + f1 * p2 * (f1 - p1);
    let r = p1 * p2;

    let mut sum = 0.0f64;
    let mut pow = 1.0f64;
    for _ in 0..max_cycles {
        let term = a * pow;
        if term == 0.0 {
            pow = 0.0;
            break;
        }
        sum += term;
        pow *= r;
    }
    let tail = if r < 1.0 {
        a * pow / (1.0 - r)
    } else {
        f64::INFINITY
    };
    Ok(TransformResult {
        value: unit_clamp(sum),
        abs_error_estimate: tail + propagate_closed(&k) + 1e-13 * (1.0 + sum.abs()),
        method: Method::ScenarioSum,
    })
}
