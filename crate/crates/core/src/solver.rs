// SPDX-License-Identifier: MIT OR Apache-2.0

//! Dynamic program over piecewise-quadratic value functions.
//!
//! `V(i, m, y)` is the least cost of covering `[t_i, t_N]` with `m` segments
//! when the fit takes the value `y` at `t_i`. Each `V(i, m, .)` is the lower
//! envelope of finitely many convex quadratics, one per surviving choice of
//! the remaining breakpoints, so it is stored exactly as an [`Envelope`].
//!
//! One step of the recursion takes every quadratic `p` of `V(i', m - 1, .)`,
//! adds the segment cost `l(i, i')` and minimizes out the value at `t_{i'}`.
//! The result is again a convex quadratic in `y` and is inserted into the
//! envelope of `V(i, m, .)`. Every produced quadratic remembers `i'`, the
//! quadratic it came from and the affine map `y -> y'` of the minimizer, so
//! the optimal breakpoints and values fall out by following those links.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::{QuadraticForm2, Signal, TransitionCosts};
use crate::envelope::{Envelope, EnvelopeMin, Origin, Quadratic};
use crate::error::{Error, Result};

/// Cost charged per segment in the penalized problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Penalty(f64);

impl Penalty {
    pub fn new(zeta: f64) -> Result<Self> {
        if zeta.is_finite() && zeta >= 0.0 {
            Ok(Self(zeta))
        } else {
            Err(Error::InvalidPenalty(zeta))
        }
    }

    pub fn zeta(&self) -> f64 {
        self.0
    }
}

/// Order in which successor breakpoints are visited while building an envelope.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SuccessorOrder {
    #[default]
    Ascending,
    /// Deterministic pseudo-random permutation per envelope, seeded.
    Shuffled(u64),
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Worker threads for building the envelopes of one stage. `1` runs inline.
    pub threads: usize,
    /// Keep every envelope so that [`instrumentation_report`] can be produced.
    pub instrument: bool,
    pub successor_order: SuccessorOrder,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { threads: 1, instrument: false, successor_order: SuccessorOrder::Ascending }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Longest envelope seen at any time during the solve.
    pub max_envelope_len: usize,
    /// Quadratics produced by minimizing out and offered for insertion.
    pub offered: usize,
    /// Offered quadratics that were kept at insertion time.
    pub accepted: usize,
    pub elapsed: Duration,
}

impl Diagnostics {
    fn absorb(&mut self, env: &Envelope) {
        self.max_envelope_len = self.max_envelope_len.max(env.peak_len());
        self.offered += env.offered();
        self.accepted += env.accepted();
    }
}

/// An optimal continuous piecewise-linear fit.
#[derive(Clone, Debug)]
pub struct FitResult {
    /// Breakpoint grid indices, starting at 0 and ending at `N`.
    pub indices: Vec<usize>,
    /// Fitted value at each breakpoint.
    pub values: Vec<f64>,
    /// Optimal objective: squared error, plus `zeta * segments` when penalized.
    pub objective: f64,
    /// Squared error alone.
    pub residual: f64,
    pub segments: usize,
    pub diagnostics: Diagnostics,
}

impl FitResult {
    /// Value of the fitted function at time `t` on `grid`.
    pub fn value_at(&self, grid: &[f64], t: f64) -> Result<f64> {
        let times: Vec<f64> = self.indices.iter().map(|&i| grid[i]).collect();
        let (first, last) = (times[0], *times.last().unwrap());
        if !(first..=last).contains(&t) {
            return Err(Error::Usage(format!("t = {t} lies outside [{first}, {last}]")));
        }
        let k = times.partition_point(|&tk| tk <= t);
        if k == 0 || times[k - 1] == t {
            return Ok(self.values[k.max(1) - 1]);
        }
        let (t0, t1) = (times[k - 1], times[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        Ok((t1 - t) / (t1 - t0) * y0 + (t - t0) / (t1 - t0) * y1)
    }
}

/// Linear interpolation of a fit at time `t` (grid index for discrete signals).
pub fn evaluate_fit(fit: &FitResult, signal: &Signal, t: f64) -> Result<f64> {
    fit.value_at(signal.grid(), t)
}

/// Every envelope built during an instrumented solve.
#[derive(Clone, Debug)]
pub struct StageTable {
    intervals: usize,
    penalized: bool,
    /// Constrained: `stages[m - 1][i]` for `0 <= i <= N - m`. Penalized: one row indexed by `i < N`.
    stages: Vec<Vec<Envelope>>,
}

impl StageTable {
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn is_penalized(&self) -> bool {
        self.penalized
    }

    /// Envelope of `V(i, m, .)`; for penalized tables `m` is ignored.
    pub fn envelope(&self, m: usize, i: usize) -> Option<&Envelope> {
        let row = if self.penalized { self.stages.first() } else { self.stages.get(m.checked_sub(1)?) };
        row?.get(i)
    }

    pub fn stages(&self) -> &[Vec<Envelope>] {
        &self.stages
    }
}

/// Envelope lengths gathered from a [`StageTable`].
#[derive(Clone, Debug, PartialEq)]
pub struct InstrumentationReport {
    /// `max_m len(V(i, m, .))` for each `i` in `0..N`.
    pub max_len_by_index: Vec<usize>,
    /// Longest envelope at any time during construction.
    pub r: usize,
    /// Whether `r <= N`.
    pub bound_held: bool,
    /// Indices where the final envelope length exceeded `N - i`.
    pub index_bound_violations: Vec<usize>,
}

pub fn instrumentation_report(table: &StageTable) -> InstrumentationReport {
    let n = table.intervals;
    let mut max_len_by_index = vec![0usize; n];
    let mut r = 0;
    for row in &table.stages {
        for (i, env) in row.iter().enumerate() {
            max_len_by_index[i] = max_len_by_index[i].max(env.len());
            r = r.max(env.peak_len());
        }
    }
    let index_bound_violations =
        (0..n).filter(|&i| max_len_by_index[i] > n - i).collect();
    InstrumentationReport { max_len_by_index, r, bound_held: r <= n, index_bound_violations }
}

/// Coefficients of `min_{y'} [qf(y, y') + p(y') + extra]` and the minimizer map.
#[inline]
fn partial_minimum(qf: &QuadraticForm2, p: &Quadratic, extra: f64) -> [f64; 5] {
    let off = 0.5 * (qf.p[0][1] + qf.p[1][0]);
    let curvature = qf.p[1][1] + p.a;
    let linear = qf.q[1] + p.b;
    let a = qf.p[0][0] - off * off / curvature;
    let b = qf.q[0] - off * linear / curvature;
    let c = qf.r + p.c + extra - linear * linear / (4.0 * curvature);
    [a, b, c, -off / curvature, -linear / (2.0 * curvature)]
}

/// Minimizes the successor value out of `qf(y, y') + p(y') + extra`.
///
/// The result records `next_index`, `p` and the map `y' = kappa*y + eta`.
pub fn minimize_out(qf: &QuadraticForm2, p: &Quadratic, next_index: usize, extra: f64) -> Result<Quadratic> {
    if !(qf.p[1][1] + p.a > 0.0) {
        return Err(Error::Internal(format!(
            "segment cost plus successor value is not strictly convex in the successor value \
             (P22 = {}, a = {})",
            qf.p[1][1], p.a
        )));
    }
    let [a, b, c, kappa, eta] = partial_minimum(qf, p, extra);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Internal(format!("partial minimum is not strictly convex (a = {a})")));
    }
    Ok(Quadratic::with_origin(a, b, c, Origin { next_index, kappa, eta, parent: p.clone() }))
}

/// Offers `min_{y'} [qf + p + extra]` for every quadratic `p` of `successor`.
fn offer_all(
    env: &mut Envelope,
    qf: &QuadraticForm2,
    successor: impl Iterator<Item = Quadratic>,
    next_index: usize,
    extra: f64,
) -> Result<()> {
    for p in successor {
        let [a, b, c, kappa, eta] = partial_minimum(qf, &p, extra);
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Internal(format!(
                "partial minimum for successor {next_index} is not strictly convex (a = {a})"
            )));
        }
        env.insert_with(a, b, c, || {
            Quadratic::with_origin(a, b, c, Origin { next_index, kappa, eta, parent: p })
        });
    }
    Ok(())
}

fn successor_range(first: usize, last: usize, order: SuccessorOrder, salt: u64) -> Vec<usize> {
    let mut range: Vec<usize> = (first..=last).collect();
    if let SuccessorOrder::Shuffled(seed) = order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        range.shuffle(&mut rng);
    }
    range
}

/// Follows provenance links from the optimum of `V(start, ., .)`.
///
/// Returns the breakpoint indices and values; fails if the chain does not end at `last_index`.
pub fn recover(start: usize, best: &EnvelopeMin, last_index: usize) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut indices = vec![start];
    let mut values = vec![best.y];
    let mut quad = &best.quad;
    let mut y = best.y;
    while let Some(origin) = quad.origin() {
        if origin.next_index <= *indices.last().unwrap() {
            return Err(Error::Internal(format!(
                "provenance chain goes backwards: {} after {}",
                origin.next_index,
                indices.last().unwrap()
            )));
        }
        y = origin.kappa * y + origin.eta;
        indices.push(origin.next_index);
        values.push(y);
        quad = &origin.parent;
    }
    if *indices.last().unwrap() != last_index {
        return Err(Error::Internal(format!(
            "provenance chain ends at {} instead of {last_index}",
            indices.last().unwrap()
        )));
    }
    Ok((indices, values))
}

fn run_pool<T, F>(threads: usize, job: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> Result<T> + Send,
{
    if threads <= 1 {
        return job();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    pool.install(job)
}

/// Fits for every segment count `1..=max_segments` of the budgeted problem.
#[derive(Clone, Debug)]
pub struct ConstrainedSolution {
    /// `fits[m - 1]` uses exactly `m` segments.
    pub fits: Vec<FitResult>,
    pub stages: Option<StageTable>,
}

impl ConstrainedSolution {
    pub fn best(&self) -> &FitResult {
        self.fits.last().expect("at least one segment")
    }
}

/// Exact least-squares fits with exactly `m` segments for every `m <= max_segments`.
pub fn solve_constrained(signal: &Signal, max_segments: usize, options: &SolverOptions) -> Result<ConstrainedSolution> {
    solve_constrained_costs(&TransitionCosts::new(signal), max_segments, options)
}

pub fn solve_constrained_costs(
    costs: &TransitionCosts,
    max_segments: usize,
    options: &SolverOptions,
) -> Result<ConstrainedSolution> {
    let n = costs.intervals();
    if n < 1 {
        return Err(Error::InvalidSignal("need at least one grid interval".into()));
    }
    if max_segments < 1 || max_segments > n {
        return Err(Error::InfeasibleBudget { requested: max_segments, max: n });
    }
    let started = Instant::now();
    run_pool(options.threads, || {
        let parallel = options.threads > 1;
        let terminal = costs.terminal();
        let mut diagnostics = Diagnostics::default();
        let mut fits = Vec::with_capacity(max_segments);
        let mut table = Vec::new();

        // One segment: straight to the last grid point.
        let base = |i: usize| -> Result<Envelope> {
            let mut env = Envelope::new();
            offer_all(&mut env, &costs.transition_unchecked(i, n), std::iter::once(terminal.clone()), n, 0.0)?;
            Ok(env)
        };
        let mut prev: Vec<Envelope> = if parallel {
            (0..n).into_par_iter().map(base).collect::<Result<_>>()?
        } else {
            (0..n).map(base).collect::<Result<_>>()?
        };

        for m in 1..=max_segments {
            if m > 1 {
                let last_successor = n - m + 1;
                let build = |i: usize| -> Result<Envelope> {
                    let mut env = Envelope::new();
                    let salt = ((m as u64) << 32) ^ i as u64;
                    for j in successor_range(i + 1, last_successor, options.successor_order, salt) {
                        let qf = costs.transition_unchecked(i, j);
                        let quads = prev[j].pieces().iter().map(|piece| piece.quad.clone());
                        offer_all(&mut env, &qf, quads, j, 0.0)?;
                    }
                    Ok(env)
                };
                let cur: Vec<Envelope> = if parallel {
                    (0..=n - m).into_par_iter().map(build).collect::<Result<_>>()?
                } else {
                    (0..=n - m).map(build).collect::<Result<_>>()?
                };
                let done = std::mem::replace(&mut prev, cur);
                if options.instrument {
                    table.push(done);
                }
            }
            prev.iter().for_each(|env| diagnostics.absorb(env));

            let best = prev[0].global_min()?;
            let (indices, values) = recover(0, &best, n)?;
            if indices.len() != m + 1 {
                return Err(Error::Internal(format!(
                    "recovered {} segments for a {m}-segment value function",
                    indices.len() - 1
                )));
            }
            fits.push(FitResult {
                indices,
                values,
                objective: best.value,
                residual: best.value,
                segments: m,
                diagnostics: Diagnostics::default(),
            });
        }
        if options.instrument {
            table.push(prev);
        }

        diagnostics.elapsed = started.elapsed();
        for fit in &mut fits {
            fit.diagnostics = diagnostics.clone();
        }
        let stages = options.instrument.then_some(StageTable { intervals: n, penalized: false, stages: table });
        Ok(ConstrainedSolution { fits, stages })
    })
}

#[derive(Clone, Debug)]
pub struct RegularizedSolution {
    pub fit: FitResult,
    pub stages: Option<StageTable>,
}

/// Exact minimizer of squared error plus `zeta` per segment.
pub fn solve_regularized(signal: &Signal, penalty: Penalty, options: &SolverOptions) -> Result<RegularizedSolution> {
    solve_regularized_costs(&TransitionCosts::new(signal), penalty, options)
}

/// Penalized solve. Envelopes depend on all later ones, so this runs on a single thread.
pub fn solve_regularized_costs(
    costs: &TransitionCosts,
    penalty: Penalty,
    options: &SolverOptions,
) -> Result<RegularizedSolution> {
    let n = costs.intervals();
    if n < 1 {
        return Err(Error::InvalidSignal("need at least one grid interval".into()));
    }
    let zeta = penalty.zeta();
    let started = Instant::now();
    let terminal = costs.terminal();
    let mut envs = vec![Envelope::new(); n];

    for i in (0..n).rev() {
        let (head, tail) = envs.split_at_mut(i + 1);
        let env = &mut head[i];
        for j in successor_range(i + 1, n, options.successor_order, i as u64) {
            let qf = costs.transition_unchecked(i, j);
            if j == n {
                offer_all(env, &qf, std::iter::once(terminal.clone()), n, zeta)?;
            } else {
                let quads = tail[j - i - 1].pieces().iter().map(|piece| piece.quad.clone());
                offer_all(env, &qf, quads, j, zeta)?;
            }
        }
    }

    let mut diagnostics = Diagnostics::default();
    envs.iter().for_each(|env| diagnostics.absorb(env));
    let best = envs[0].global_min()?;
    let (indices, values) = recover(0, &best, n)?;
    let segments = indices.len() - 1;
    diagnostics.elapsed = started.elapsed();
    let fit = FitResult {
        indices,
        values,
        objective: best.value,
        // A sum of squares; clamp away rounding below zero.
        residual: (best.value - zeta * segments as f64).max(0.0),
        segments,
        diagnostics,
    };
    let stages = options.instrument.then(|| StageTable { intervals: n, penalized: true, stages: vec![envs] });
    Ok(RegularizedSolution { fit, stages })
}
