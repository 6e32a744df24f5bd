// SPDX-License-Identifier: MIT OR Apache-2.0

//! Shared fixtures and independent reference computations for the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use segfit::{Quadratic, Signal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| <= rel * max(|a|, |b|) + floor`.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}

/// Absolute floor for comparing objectives: a tiny multiple of the signal energy.
pub fn objective_floor(signal: &Signal) -> f64 {
    let energy: f64 = signal.values().iter().map(|v| v * v).sum();
    1e-12 * (1.0 + energy)
}

pub fn random_discrete(rng: &mut ChaCha8Rng, n_points: usize) -> Signal {
    Signal::discrete((0..n_points).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_grid(rng: &mut ChaCha8Rng, n_points: usize) -> Vec<f64> {
    let mut t = rng.gen_range(-2.0..2.0);
    (0..n_points)
        .map(|_| {
            let cur = t;
            t += rng.gen_range(0.1..1.5);
            cur
        })
        .collect()
}

pub fn random_continuous(rng: &mut ChaCha8Rng, n_points: usize) -> Signal {
    let grid = random_grid(rng, n_points);
    Signal::continuous(grid, (0..n_points).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn random_walk(rng: &mut ChaCha8Rng, n_points: usize) -> Vec<f64> {
    let mut x = 0.0;
    (0..n_points)
        .map(|_| {
            let step: f64 = StandardNormal.sample(rng);
            x += step;
            x
        })
        .collect()
}

pub fn random_convex(rng: &mut ChaCha8Rng) -> Quadratic {
    Quadratic::from_vertex(rng.gen_range(0.05..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

/// Direct summation of the discrete segment cost over `k = i .. j-1`.
pub fn discrete_segment_cost(g: &[f64], i: usize, j: usize, y: f64, y_next: f64) -> f64 {
    let d = (j - i) as f64;
    (i..j)
        .map(|k| {
            let w = (k - i) as f64 / d;
            let line = (1.0 - w) * y + w * y_next;
            (g[k] - line).powi(2)
        })
        .sum()
}

/// Composite Simpson quadrature of the squared residual between the line
/// through `(t_i, y)`, `(t_j, y')` and the piecewise-linear signal. Panels are
/// aligned with the signal's knots; about `points` evaluations in total.
pub fn continuous_segment_cost(grid: &[f64], g: &[f64], i: usize, j: usize, y: f64, y_next: f64, points: usize) -> f64 {
    let (t0, t1) = (grid[i], grid[j]);
    let line = |t: f64| y + (y_next - y) * (t - t0) / (t1 - t0);
    let per_interval = (points / (j - i)).max(2) & !1;
    let mut total = 0.0;
    for k in i..j {
        let (a, b) = (grid[k], grid[k + 1]);
        let signal = |t: f64| g[k] + (g[k + 1] - g[k]) * (t - a) / (b - a);
        let f = |t: f64| (line(t) - signal(t)).powi(2);
        let h = (b - a) / per_interval as f64;
        let mut s = f(a) + f(b);
        for m in 1..per_interval {
            let w = if m % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + m as f64 * h);
        }
        total += s * h / 3.0;
    }
    total
}

/// Squared error of a breakpoint fit evaluated sample by sample or by quadrature.
pub fn direct_fit_error(signal: &Signal, indices: &[usize], values: &[f64]) -> f64 {
    let g = signal.values();
    let mut total = 0.0;
    for (k, pair) in indices.windows(2).enumerate() {
        total += match signal.kind() {
            segfit::SignalKind::Discrete => discrete_segment_cost(g, pair[0], pair[1], values[k], values[k + 1]),
            segfit::SignalKind::Continuous => {
                continuous_segment_cost(signal.grid(), g, pair[0], pair[1], values[k], values[k + 1], 10_000)
            }
        };
    }
    if signal.kind() == segfit::SignalKind::Discrete {
        total += (g[g.len() - 1] - values[values.len() - 1]).powi(2);
    }
    total
}

/// Minimum of `f` over a dense grid on `[lo, hi]`, refined once around the best cell.
pub fn grid_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let scan = |lo: f64, hi: f64| {
        let h = (hi - lo) / (points - 1) as f64;
        (0..points)
            .map(|k| lo + k as f64 * h)
            .map(|y| (y, f(y)))
            .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    };
    let (y0, _) = scan(lo, hi);
    let h = (hi - lo) / (points - 1) as f64;
    scan(y0 - h, y0 + h)
}
