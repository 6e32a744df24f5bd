// SPDX-License-Identifier: MIT OR Apache-2.0

//! Brute-force reference solutions.
//!
//! For a fixed set of breakpoints the objective is a convex quadratic in the
//! breakpoint values whose Hessian is tridiagonal, so the optimal values come
//! from one symmetric tridiagonal solve. Enumerating every breakpoint subset
//! then gives the exact optimum of the budgeted problem for small grids.
//! Nothing here touches the envelope machinery.

use itertools::Itertools;

use crate::cost::{Signal, TransitionCosts};
use crate::error::{Error, Result};

/// Upper limit on the number of subsets [`brute_force`] will enumerate.
pub const MAX_SUBSETS: u128 = 1_000_000;

const SINGULAR_SHIFT: f64 = 1e-12;

/// Symmetric tridiagonal system `A x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedSystem {
    pub diag: Vec<f64>,
    /// `off[k]` couples unknowns `k` and `k + 1`.
    pub off: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl BandedSystem {
    /// Gaussian elimination without pivoting (Thomas algorithm).
    ///
    /// Returns the solution and whether a vanishing pivot forced a diagonal shift.
    pub fn solve(&self) -> (Vec<f64>, bool) {
        let n = self.diag.len();
        let mut diag = self.diag.clone();
        let mut rhs = self.rhs.clone();
        let mut shifted = false;
        let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
        for k in 0..n {
            if k > 0 {
                let factor = self.off[k - 1] / diag[k - 1];
                diag[k] -= factor * self.off[k - 1];
                rhs[k] -= factor * rhs[k - 1];
            }
            if diag[k].abs() <= SINGULAR_SHIFT * scale {
                diag[k] += SINGULAR_SHIFT * scale;
                shifted = true;
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let coupled = if k + 1 < n { self.off[k] * x[k + 1] } else { 0.0 };
            x[k] = (rhs[k] - coupled) / diag[k];
        }
        (x, shifted)
    }
}

/// Optimal values for a fixed breakpoint set.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedFit {
    pub values: Vec<f64>,
    pub objective: f64,
    /// The normal equations were singular and were solved with a small diagonal shift.
    pub shifted: bool,
}

/// Normal equations of the fixed-breakpoint least-squares problem.
pub fn normal_equations(costs: &TransitionCosts, indices: &[usize]) -> Result<BandedSystem> {
    let n = costs.intervals();
    if indices.len() < 2 || indices[0] != 0 || *indices.last().unwrap() != n {
        return Err(Error::InvalidInput(format!("breakpoints must start at 0 and end at {n}")));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
    }
    let k = indices.len();
    let mut diag = vec![0.0; k];
    let mut off = vec![0.0; k - 1];
    let mut linear = vec![0.0; k];
    for (s, pair) in indices.windows(2).enumerate() {
        let qf = costs.transition(pair[0], pair[1])?;
        diag[s] += qf.p[0][0];
        diag[s + 1] += qf.p[1][1];
        off[s] += 0.5 * (qf.p[0][1] + qf.p[1][0]);
        linear[s] += qf.q[0];
        linear[s + 1] += qf.q[1];
    }
    let terminal = costs.terminal();
    diag[k - 1] += terminal.a;
    linear[k - 1] += terminal.b;
    // Gradient of y^T A y + b^T y vanishes at A y = -b / 2.
    let rhs = linear.iter().map(|b| -0.5 * b).collect();
    Ok(BandedSystem { diag, off, rhs })
}

/// Exact least squares over the breakpoint values for the given indices.
pub fn fixed_breakpoint_ls(signal: &Signal, indices: &[usize]) -> Result<FixedFit> {
    fixed_breakpoint_ls_costs(&TransitionCosts::new(signal), indices)
}

pub fn fixed_breakpoint_ls_costs(costs: &TransitionCosts, indices: &[usize]) -> Result<FixedFit> {
    let (values, shifted) = normal_equations(costs, indices)?.solve();
    let objective = costs.score(indices, &values)?;
    Ok(FixedFit { values, objective, shifted })
}

/// Best fit found by exhaustive enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleFit {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub objective: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j as u128 + 1))
}

/// Optimum over all breakpoint sets with exactly `segments` segments.
///
/// Ties keep the lexicographically smallest index set.
pub fn brute_force(signal: &Signal, segments: usize) -> Result<OracleFit> {
    brute_force_costs(&TransitionCosts::new(signal), segments)
}

pub fn brute_force_costs(costs: &TransitionCosts, segments: usize) -> Result<OracleFit> {
    let n = costs.intervals();
    if segments < 1 || segments > n {
        return Err(Error::InfeasibleBudget { requested: segments, max: n });
    }
    let subsets = binomial(n - 1, segments - 1);
    if subsets > MAX_SUBSETS {
        return Err(Error::SearchTooLarge { subsets, limit: MAX_SUBSETS });
    }
    let mut best: Option<OracleFit> = None;
    for interior in (1..n).combinations(segments - 1) {
        let mut indices = Vec::with_capacity(segments + 1);
        indices.push(0);
        indices.extend(interior);
        indices.push(n);
        let fit = fixed_breakpoint_ls_costs(costs, &indices)?;
        if best.as_ref().map_or(true, |b| fit.objective < b.objective) {
            best = Some(OracleFit { indices, values: fit.values, objective: fit.objective });
        }
    }
    best.ok_or_else(|| Error::Internal("no breakpoint subset enumerated".into()))
}

/// Optimum of the penalized problem by enumerating every segment count.
pub fn brute_force_penalized(costs: &TransitionCosts, zeta: f64) -> Result<(OracleFit, usize)> {
    let mut best: Option<(OracleFit, usize, f64)> = None;
    for m in 1..=costs.intervals() {
        let fit = brute_force_costs(costs, m)?;
        let total = fit.objective + zeta * m as f64;
        if best.as_ref().map_or(true, |b| total < b.2) {
            best = Some((fit, m, total));
        }
    }
    let (fit, m, _) = best.expect("at least one segment count");
    Ok((fit, m))
}
