//! Lifetime moments from the transform at the origin.
//!
//! `E tau^n = (-1)^n L^(n)(0)`. The derivative is taken one-sided — the
//! transform need not exist for negative arguments — with second-order
//! stencils on the nodes `0, h, 2h, ...` and a Richardson/Neville table over
//! a halving step sequence starting at `h = 1e-2`. Extrapolation stops as
//! soon as two successive diagonal entries agree to six significant digits.

use crate::error::Error;
use crate::model::SystemModel;
use crate::Result;

use super::{check_proper, kernels, closed_from_kernels};

/// One-sided second-order stencils for the n-th derivative at 0 on nodes
/// `0, h, ..., (len-1) h`, to be divided by `h^n`.
const STENCILS: [&[f64]; 4] = [
    &[-1.5, 2.0, -0.5],
    &[2.0, -5.0, 4.0, -1.0],
    &[-2.5, 9.0, -12.0, 7.0, -1.5],
    &[3.0, -14.0, 26.0, -24.0, 11.0, -2.0],
];

const FIRST_STEP: f64 = 1e-2;
const MAX_LEVELS: usize = 22;
const REL_STABILIZATION: f64 = 1e-6;

fn sum_abs(coeffs: &[f64]) -> f64 {
    coeffs.iter().map(|c| c.abs()).sum()
}

/// `E tau^n` for `n` in `1..=4`; `n = 1` is the mean time to failure.
pub fn moment(model: &SystemModel, n: u32) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "moment order must be 1..=4, got {n}"
        )));
    }
    let norm = model.normalized();
    check_proper(&norm)?;

    let transform = |s: f64| -> Result<f64> {
        let k = kernels(&norm, s)?;
        Ok(closed_from_kernels(&k, s)?.value)
    };

    let coeffs = STENCILS[(n - 1) as usize];
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(MAX_LEVELS);
    let mut best = f64::NAN;
    let mut best_gap = f64::INFINITY;

    for level in 0..MAX_LEVELS {
        let h = FIRST_STEP * 0.5f64.powi(level as i32);
        let mut acc = 0.0;
        for (j, c) in coeffs.iter().enumerate() {
            acc += c * transform(j as f64 * h)?;
        }
        let d = acc / h.powi(n as i32);

        // Neville column j removes the h^{j+1} error term.
        let mut row = vec![d];
        for j in 1..=level {
            let factor = 2f64.powi(j as i32 + 1) - 1.0;
            let cur = row[j - 1];
            let prev = rows[level - 1][j - 1];
            row.push(cur + (cur - prev) / factor);
        }
        let diag = *row.last().unwrap();

        if level > 0 {
            let prev_diag = *rows[level - 1].last().unwrap();
            let gap = (diag - prev_diag).abs();
            // Rounding noise of the stencil at this step; agreement below it
            // is as stable as f64 allows. Capped so the shortcut never
            // accepts worse than 1e-3 relative.
            let noise = 8.0 * f64::EPSILON * sum_abs(coeffs) / h.powi(n as i32);
            let accept = (REL_STABILIZATION * diag.abs().max(f64::MIN_POSITIVE))
                .max(noise.min(1e-3 * diag.abs()));
            if gap <= accept {
                return Ok(sign * diag);
            }
            if gap < best_gap && diag.is_finite() {
                best_gap = gap;
                best = diag;
            }
        }
        rows.push(row);
    }

    Err(Error::MomentDiverged { best: sign * best })
}
