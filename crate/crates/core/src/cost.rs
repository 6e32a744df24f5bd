// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment costs as quadratic forms in the endpoint values.
//!
//! Approximating the signal on `[t_i, t_j]` by the line through `(t_i, y)`
//! and `(t_j, y')` costs
//!
//! ```text
//! l_ij(y, y') = [y y'] P [y y']^T + q^T [y y'] + r
//! ```
//!
//! where `P` depends only on the grid and `q`, `r` depend on three running
//! moments of the signal (`g`, `t*g`, `g^2`). After one O(N) pass over the
//! signal every `l_ij` is available in O(1).
//!
//! Continuous signals are samples interpreted as a piecewise-linear function
//! of `t`, so all integrals are closed-form. Discrete signals use the grid
//! `t_k = k`, sum over `k = i .. j-1`, and carry a terminal cost `(g[N] - y)^2`
//! for the last sample.

use crate::envelope::Quadratic;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignalKind {
    /// Time series `g[0..=N]` on the implicit grid `t_k = k`.
    Discrete,
    /// Samples of a continuous function on an increasing grid, linear in between.
    Continuous,
}

/// A signal on the candidate breakpoint grid `t_0 < ... < t_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    kind: SignalKind,
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl Signal {
    pub fn discrete(values: Vec<f64>) -> Result<Self> {
        let grid = (0..values.len()).map(|k| k as f64).collect();
        Self::build(SignalKind::Discrete, grid, values)
    }

    pub fn continuous(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::build(SignalKind::Continuous, grid, values)
    }

    pub fn new(kind: SignalKind, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        match kind {
            SignalKind::Discrete => {
                let implicit = grid.iter().enumerate().all(|(k, &t)| t == k as f64);
                if !implicit {
                    return Err(Error::InvalidSignal(
                        "discrete signals use the grid t_k = k".into(),
                    ));
                }
                Self::build(kind, grid, values)
            }
            SignalKind::Continuous => Self::build(kind, grid, values),
        }
    }

    fn build(kind: SignalKind, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidSignal(format!(
                "grid has {} points but there are {} values",
                grid.len(),
                values.len()
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidSignal("need at least two samples".into()));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("value {k} is not finite")));
        }
        if let Some(k) = grid.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidSignal(format!("grid point {k} is not finite")));
        }
        validate_grid(&grid)?;
        Ok(Self { kind, grid, values })
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of grid intervals `N`; the grid has `N + 1` points.
    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    match grid.windows(2).position(|w| w[1] <= w[0]) {
        Some(k) => Err(Error::InvalidSignal(format!(
            "grid is not strictly increasing at index {}: {} then {}",
            k + 1,
            grid[k],
            grid[k + 1]
        ))),
        None => Ok(()),
    }
}

/// Running sums of the per-interval moments `h_1 = g`, `h_2 = t*g`, `h_3 = g^2`.
///
/// For continuous signals entry `k` accumulates the integrals over
/// `[t_0, t_{k+1}]` (length `N`); for discrete signals it accumulates the
/// samples `0..=k` (length `N + 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub h3: Vec<f64>,
}

impl Moments {
    /// Cumulates per-interval (or per-sample) moments.
    pub fn from_increments(h1: &[f64], h2: &[f64], h3: &[f64]) -> Self {
        fn cumsum(h: &[f64]) -> Vec<f64> {
            h.iter()
                .scan(0.0, |acc, &x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        }
        Self { h1: cumsum(h1), h2: cumsum(h2), h3: cumsum(h3) }
    }

    /// Moments over the contributions `i ..= j - 1`, i.e. `H[j-1] - H[i-1]` with `H[-1] = 0`.
    #[inline]
    fn range(&self, i: usize, j: usize) -> [f64; 3] {
        let at = |h: &[f64], k: usize| h[k];
        let before = |h: &[f64]| if i == 0 { 0.0 } else { at(h, i - 1) };
        [
            at(&self.h1, j - 1) - before(&self.h1),
            at(&self.h2, j - 1) - before(&self.h2),
            at(&self.h3, j - 1) - before(&self.h3),
        ]
    }
}

/// Prefix moments of a signal.
pub fn compute_moments(signal: &Signal) -> Moments {
    let (g, t) = (signal.values(), signal.grid());
    match signal.kind() {
        SignalKind::Discrete => {
            let h2: Vec<f64> = g.iter().zip(t).map(|(&v, &tk)| tk * v).collect();
            let h3: Vec<f64> = g.iter().map(|&v| v * v).collect();
            Moments::from_increments(g, &h2, &h3)
        }
        SignalKind::Continuous => {
            let n = signal.intervals();
            let (mut h1, mut h2, mut h3) =
                (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
            for k in 0..n {
                let (u, v) = (g[k], g[k + 1]);
                let (t0, w) = (t[k], t[k + 1] - t[k]);
                h1.push(w * (u + v) / 2.0);
                h2.push(w * (t0 * (u + v) / 2.0 + w * (u + 2.0 * v) / 6.0));
                h3.push(w * (u * u + u * v + v * v) / 3.0);
            }
            Moments::from_increments(&h1, &h2, &h3)
        }
    }
}

/// A quadratic form in two variables: `[y y'] P [y y']^T + q^T [y y'] + r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticForm2 {
    pub p: [[f64; 2]; 2],
    pub q: [f64; 2],
    pub r: f64,
}

impl QuadraticForm2 {
    #[inline]
    pub fn eval(&self, y: f64, y_next: f64) -> f64 {
        let p = &self.p;
        p[0][0] * y * y
            + (p[0][1] + p[1][0]) * y * y_next
            + p[1][1] * y_next * y_next
            + self.q[0] * y
            + self.q[1] * y_next
            + self.r
    }
}

pub fn eval_qf(qf: &QuadraticForm2, y: f64, y_next: f64) -> f64 {
    qf.eval(y, y_next)
}

/// Grid-only part of a segment cost.
fn gram(kind: SignalKind, t_start: f64, t_end: f64) -> [[f64; 2]; 2] {
    match kind {
        SignalKind::Continuous => {
            let s = (t_end - t_start) / 6.0;
            [[2.0 * s, s], [s, 2.0 * s]]
        }
        SignalKind::Discrete => {
            // Closed-form sums of the interpolation weights over k = i .. i'-1.
            let d = t_end - t_start;
            let den = 6.0 * d;
            [
                [(d + 1.0) * (2.0 * d + 1.0) / den, (d * d - 1.0) / den],
                [(d * d - 1.0) / den, (d - 1.0) * (2.0 * d - 1.0) / den],
            ]
        }
    }
}

#[inline]
fn assemble(kind: SignalKind, t_start: f64, t_end: f64, sums: [f64; 3]) -> QuadraticForm2 {
    let [s1, s2, s3] = sums;
    let w = t_end - t_start;
    QuadraticForm2 {
        p: gram(kind, t_start, t_end),
        q: [-2.0 * (t_end * s1 - s2) / w, -2.0 * (s2 - t_start * s1) / w],
        r: s3,
    }
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i >= j || j > n {
        return Err(Error::Usage(format!(
            "transition ({i}, {j}) requires 0 <= i < i' <= {n}"
        )));
    }
    Ok(())
}

/// Cost of a single segment from breakpoint `i` to breakpoint `j` (`i < j`).
pub fn transition_cost(
    signal: &Signal,
    moments: &Moments,
    i: usize,
    j: usize,
) -> Result<QuadraticForm2> {
    check_pair(i, j, signal.intervals())?;
    let t = signal.grid();
    Ok(assemble(signal.kind(), t[i], t[j], moments.range(i, j)))
}

/// Precomputed segment costs plus the terminal cost for a signal.
#[derive(Clone, Debug)]
pub struct TransitionCosts {
    kind: SignalKind,
    grid: Vec<f64>,
    moments: Moments,
    terminal: Option<f64>,
}

impl TransitionCosts {
    pub fn new(signal: &Signal) -> Self {
        let terminal = match signal.kind() {
            SignalKind::Discrete => signal.values().last().copied(),
            SignalKind::Continuous => None,
        };
        Self {
            kind: signal.kind(),
            grid: signal.grid().to_vec(),
            moments: compute_moments(signal),
            terminal,
        }
    }

    /// Continuous costs from per-interval integrals `h_1 = int g`, `h_2 = int t*g`,
    /// `h_3 = int g^2` over each `[t_k, t_{k+1}]`, for functions that are not
    /// piecewise linear.
    pub fn from_interval_moments(grid: Vec<f64>, h1: &[f64], h2: &[f64], h3: &[f64]) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidSignal("need at least two grid points".into()));
        }
        validate_grid(&grid)?;
        let n = grid.len() - 1;
        if h1.len() != n || h2.len() != n || h3.len() != n {
            return Err(Error::InvalidSignal(format!(
                "expected {n} interval moments per series"
            )));
        }
        if h1.iter().chain(h2).chain(h3).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal("interval moments must be finite".into()));
        }
        Ok(Self {
            kind: SignalKind::Continuous,
            grid,
            moments: Moments::from_increments(h1, h2, h3),
            terminal: None,
        })
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn transition(&self, i: usize, j: usize) -> Result<QuadraticForm2> {
        check_pair(i, j, self.intervals())?;
        Ok(self.transition_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn transition_unchecked(&self, i: usize, j: usize) -> QuadraticForm2 {
        assemble(self.kind, self.grid[i], self.grid[j], self.moments.range(i, j))
    }

    /// Value function at the last grid point with no segments left:
    /// zero for continuous signals, `(g[N] - y)^2` for discrete ones.
    pub fn terminal(&self) -> Quadratic {
        match self.terminal {
            Some(g) => Quadratic::new(1.0, -2.0 * g, g * g),
            None => Quadratic::new(0.0, 0.0, 0.0),
        }
    }

    /// Squared error of the continuous piecewise-linear function through
    /// `(t_{indices[k]}, values[k])`.
    pub fn score(&self, indices: &[usize], values: &[f64]) -> Result<f64> {
        if indices.len() != values.len() || indices.len() < 2 {
            return Err(Error::InvalidInput(
                "need matching breakpoint indices and values, at least two of each".into(),
            ));
        }
        if indices[0] != 0 || *indices.last().unwrap() != self.intervals() {
            return Err(Error::InvalidInput(format!(
                "breakpoints must start at 0 and end at {}",
                self.intervals()
            )));
        }
        let mut total = 0.0;
        for (k, pair) in indices.windows(2).enumerate() {
            let qf = self.transition(pair[0], pair[1])?;
            total += qf.eval(values[k], values[k + 1]);
        }
        Ok(total + self.terminal().eval(*values.last().unwrap()))
    }
}
