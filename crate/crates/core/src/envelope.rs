// SPDX-License-Identifier: MIT OR Apache-2.0

//! Minimal lower envelopes of strictly convex univariate quadratics.
//!
//! An [`Envelope`] stores the pointwise minimum of a set of quadratics as an
//! ordered sequence of pieces. Each piece owns an interval and the quadratic
//! that is smallest on it. The intervals partition the real line, so the
//! first piece starts at `-inf` and the last one ends at `+inf`.
//!
//! Inserting a new quadratic walks the pieces left to right, finds on each
//! piece's interval the sub-intervals where the newcomer is strictly lower,
//! and splices. Quadratics that are nowhere minimal never enter the list and
//! pieces that become nowhere minimal drop out, so the representation stays
//! minimal after every insertion. The cost is linear in the number of pieces.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Absolute part of the tie tolerance used when comparing two quadratics at a point.
pub const EPS_ABS: f64 = 1e-12;
/// Relative part of the tie tolerance used when comparing two quadratics at a point.
pub const EPS_REL: f64 = 1e-12;
/// Pieces narrower than this fraction of the neighbouring boundary scale are dropped.
pub const ZERO_WIDTH_REL: f64 = 1e-14;

/// Whether two values count as equal under the envelope's tie tolerance.
#[inline]
pub fn ties(p: f64, q: f64) -> bool {
    (p - q).abs() <= tie_tolerance(p, q)
}

#[inline]
fn tie_tolerance(p: f64, q: f64) -> f64 {
    EPS_ABS + EPS_REL * p.abs().max(q.abs())
}

/// A univariate quadratic `a*y^2 + b*y + c`, optionally tagged with the
/// dynamic-programming step that produced it.
#[derive(Clone, Debug)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    origin: Option<Arc<Origin>>,
}

/// Provenance of a quadratic produced by minimizing out the next breakpoint value.
///
/// If the quadratic is `mu(y) = min_{y'} [l(y, y') + parent(y') + extra]`,
/// the minimizing successor value is `y' = kappa * y + eta` and the
/// successor breakpoint has grid index `next_index`.
#[derive(Clone, Debug)]
pub struct Origin {
    pub next_index: usize,
    pub kappa: f64,
    pub eta: f64,
    pub parent: Quadratic,
}

impl Quadratic {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c, origin: None }
    }

    pub fn with_origin(a: f64, b: f64, c: f64, origin: Origin) -> Self {
        Self { a, b, c, origin: Some(Arc::new(origin)) }
    }

    /// Builds `scale * (y - center)^2 + offset`.
    pub fn from_vertex(scale: f64, center: f64, offset: f64) -> Self {
        Self::new(scale, -2.0 * scale * center, scale * center * center + offset)
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        (self.a * y + self.b) * y + self.c
    }

    #[inline]
    pub fn slope(&self, y: f64) -> f64 {
        2.0 * self.a * y + self.b
    }

    /// Location of the unconstrained minimum. Only meaningful for `a > 0`.
    pub fn vertex(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_deref()
    }

    /// Grid index of the breakpoint that follows the one this quadratic is a value function of.
    pub fn generating_index(&self) -> Option<usize> {
        self.origin.as_ref().map(|o| o.next_index)
    }

    /// Coefficient-wise equality, ignoring provenance.
    pub fn same_polynomial(&self, other: &Quadratic) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c
    }

    fn is_strictly_convex(&self) -> bool {
        self.a > 0.0 && self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*y^2 + {}*y + {}", self.a, self.b, self.c)
    }
}

/// A closed interval of the extended real line with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn is_negligible(&self) -> bool {
        let scale = self.lo.abs().max(self.hi.abs()).max(1.0);
        self.width() < ZERO_WIDTH_REL * scale
    }

    /// Interior points used for sign tests. Unbounded sides are probed at a
    /// distance proportional to the magnitude of the finite end.
    fn probes(&self, center_hint: f64) -> [f64; 3] {
        let (lo, hi) = (self.lo, self.hi);
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                let w = hi - lo;
                [lo + 0.25 * w, lo + 0.5 * w, lo + 0.75 * w]
            }
            (false, true) => {
                let s = hi.abs().max(1.0);
                [hi - 0.5 * s, hi - s, hi - 4.0 * s]
            }
            (true, false) => {
                let s = lo.abs().max(1.0);
                [lo + 0.5 * s, lo + s, lo + 4.0 * s]
            }
            (false, false) => {
                let s = center_hint.abs().max(1.0);
                [center_hint - s, center_hint + s, center_hint + 4.0 * s]
            }
        }
    }
}

/// How two quadratics meet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    /// Same polynomial.
    Identical,
    /// Equal quadratic and linear terms, different constants: never equal.
    Parallel,
    /// Different leading terms, no real solution.
    Disjoint,
    /// The polynomials touch at one point without changing order.
    Tangent(f64),
    /// Equal leading terms: exactly one crossing.
    Single(f64),
    /// Two crossings, in increasing order.
    Double(f64, f64),
}

impl Crossing {
    pub fn roots(&self) -> Vec<f64> {
        match *self {
            Crossing::Identical | Crossing::Parallel | Crossing::Disjoint => Vec::new(),
            Crossing::Tangent(r) | Crossing::Single(r) => vec![r],
            Crossing::Double(r1, r2) => vec![r1, r2],
        }
    }
}

/// Roots of `a*y^2 + b*y + c` for `a != 0` and positive discriminant, ascending.
fn distinct_roots(a: f64, b: f64, c: f64, disc: f64) -> (f64, f64) {
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Solves `p(y) = q(y)`.
pub fn intersect(p: &Quadratic, q: &Quadratic) -> Crossing {
    let (da, db, dc) = (p.a - q.a, p.b - q.b, p.c - q.c);
    if da == 0.0 {
        return if db == 0.0 {
            if dc == 0.0 {
                Crossing::Identical
            } else {
                Crossing::Parallel
            }
        } else {
            Crossing::Single(-dc / db)
        };
    }
    let disc = db * db - 4.0 * da * dc;
    let tol = EPS_REL * (db * db).max((4.0 * da * dc).abs());
    if disc.abs() <= tol {
        Crossing::Tangent(-db / (2.0 * da))
    } else if disc < 0.0 {
        Crossing::Disjoint
    } else {
        let (r1, r2) = distinct_roots(da, db, dc, disc);
        Crossing::Double(r1, r2)
    }
}

/// Open sets (over the reals) where `d(y) = da*y^2 + db*y + dc < 0`, as at most two intervals.
fn negative_set(da: f64, db: f64, dc: f64) -> [Option<Interval>; 2] {
    let all = Some(Interval::REAL_LINE);
    if da == 0.0 {
        if db == 0.0 {
            return [if dc < 0.0 { all } else { None }, None];
        }
        let r = -dc / db;
        let side = if db > 0.0 {
            Interval::new(f64::NEG_INFINITY, r)
        } else {
            Interval::new(r, f64::INFINITY)
        };
        return [Some(side), None];
    }
    let disc = db * db - 4.0 * da * dc;
    if disc <= 0.0 {
        // No sign change: negative everywhere (up to a touching point) or nowhere.
        return [if da < 0.0 { all } else { None }, None];
    }
    let (r1, r2) = distinct_roots(da, db, dc, disc);
    if da > 0.0 {
        [Some(Interval::new(r1, r2)), None]
    } else {
        [
            Some(Interval::new(f64::NEG_INFINITY, r1)),
            Some(Interval::new(r2, f64::INFINITY)),
        ]
    }
}

/// A piece of an envelope: `quad` is minimal on `interval`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub interval: Interval,
    pub quad: Quadratic,
}

/// The global minimum of an envelope.
#[derive(Clone, Debug)]
pub struct EnvelopeMin {
    pub y: f64,
    pub value: f64,
    pub quad: Quadratic,
}

/// Piecewise-quadratic lower envelope, kept minimal under insertion.
#[derive(Clone, Debug, Default)]
pub struct Envelope {
    pieces: Vec<Piece>,
    peak_len: usize,
    offered: usize,
    accepted: usize,
}

impl Envelope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Largest number of pieces held at any point during construction.
    pub fn peak_len(&self) -> usize {
        self.peak_len
    }

    /// Number of quadratics offered for insertion.
    pub fn offered(&self) -> usize {
        self.offered
    }

    /// Number of offered quadratics that became part of the envelope.
    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Inserts `mu`, keeping it only where it is strictly below the current minimum.
    ///
    /// Returns whether `mu` became part of the envelope.
    pub fn insert(&mut self, mu: Quadratic) -> Result<bool> {
        if !mu.is_strictly_convex() {
            return Err(Error::InvalidInput(format!(
                "envelope quadratics must be strictly convex with finite coefficients, got {mu}"
            )));
        }
        let (a, b, c) = (mu.a, mu.b, mu.c);
        Ok(self.insert_with(a, b, c, move || mu))
    }

    /// Insertion that only materializes the quadratic (and its provenance)
    /// when it is actually kept. The caller guarantees `a > 0`.
    pub(crate) fn insert_with<F>(&mut self, a: f64, b: f64, c: f64, build: F) -> bool
    where
        F: FnOnce() -> Quadratic,
    {
        self.offered += 1;
        if self.pieces.is_empty() {
            self.pieces.push(Piece { interval: Interval::REAL_LINE, quad: build() });
            self.accepted += 1;
            self.peak_len = self.peak_len.max(1);
            return true;
        }

        let candidate = Quadratic::new(a, b, c);
        let mut spliced: Option<(Vec<Piece>, Quadratic)> = None;
        let mut build = Some(build);

        for (k, piece) in self.pieces.iter().enumerate() {
            let regions = below_regions(&candidate, piece);
            if regions.iter().all(Option::is_none) {
                if let Some((out, _)) = spliced.as_mut() {
                    push_segment(out, piece.interval, &piece.quad);
                }
                continue;
            }
            let (out, mu) = spliced.get_or_insert_with(|| {
                let mut out = Vec::with_capacity(self.pieces.len() + 2);
                out.extend_from_slice(&self.pieces[..k]);
                (out, (build.take().expect("built once"))())
            });
            let mut cursor = piece.interval.lo;
            for region in regions.into_iter().flatten() {
                if region.lo > cursor {
                    push_segment(out, Interval::new(cursor, region.lo), &piece.quad);
                }
                push_segment(out, region, mu);
                cursor = region.hi;
            }
            if cursor < piece.interval.hi {
                push_segment(out, Interval::new(cursor, piece.interval.hi), &piece.quad);
            }
        }

        match spliced {
            Some((out, _)) => {
                self.pieces = out;
                self.accepted += 1;
                self.peak_len = self.peak_len.max(self.pieces.len());
                true
            }
            None => false,
        }
    }

    /// Value of the envelope at `y`.
    pub fn evaluate(&self, y: f64) -> Result<f64> {
        Ok(self.piece_at(y)?.quad.eval(y))
    }

    /// The piece whose interval contains `y` (the left one on a shared boundary).
    pub fn piece_at(&self, y: f64) -> Result<&Piece> {
        if self.pieces.is_empty() {
            return Err(Error::Usage("cannot evaluate an empty envelope".into()));
        }
        let k = self.pieces.partition_point(|p| p.interval.hi < y);
        Ok(&self.pieces[k.min(self.pieces.len() - 1)])
    }

    /// Global minimizer over the real line. Exact ties go to the smallest `y`.
    pub fn global_min(&self) -> Result<EnvelopeMin> {
        let mut best: Option<(f64, f64, &Quadratic)> = None;
        for piece in &self.pieces {
            let y = piece.quad.vertex().clamp(piece.interval.lo, piece.interval.hi);
            let value = piece.quad.eval(y);
            if best.map_or(true, |(_, v, _)| value < v) {
                best = Some((y, value, &piece.quad));
            }
        }
        let (y, value, quad) =
            best.ok_or_else(|| Error::Usage("cannot minimize an empty envelope".into()))?;
        Ok(EnvelopeMin { y, value, quad: quad.clone() })
    }

    /// Checks the partition, continuity, coalescing and minimality invariants.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let (first, last) = match (self.pieces.first(), self.pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Ok(()),
        };
        if first.interval.lo != f64::NEG_INFINITY || last.interval.hi != f64::INFINITY {
            return fail("pieces do not cover the real line".into());
        }
        for (k, piece) in self.pieces.iter().enumerate() {
            if piece.interval.lo >= piece.interval.hi {
                return fail(format!("piece {k} has empty interval {:?}", piece.interval));
            }
            if !piece.quad.is_strictly_convex() {
                return fail(format!("piece {k} holds a non-convex quadratic"));
            }
        }
        for (k, pair) in self.pieces.windows(2).enumerate() {
            let (left, right) = (&pair[0], &pair[1]);
            let y = left.interval.hi;
            if y != right.interval.lo {
                return fail(format!("gap or overlap between pieces {k} and {}", k + 1));
            }
            if left.quad.same_polynomial(&right.quad) {
                return fail(format!("pieces {k} and {} hold the same quadratic", k + 1));
            }
            let (u, v) = (left.quad.eval(y), right.quad.eval(y));
            let slope = left.quad.slope(y).abs().max(right.quad.slope(y).abs());
            let tol = 1e-9 * (1.0 + u.abs().max(v.abs()) + slope * y.abs());
            if (u - v).abs() > tol {
                return fail(format!("discontinuity at boundary {y}: {u} vs {v}"));
            }
        }
        for (k, piece) in self.pieces.iter().enumerate() {
            for y in piece.interval.probes(piece.quad.vertex()) {
                let own = piece.quad.eval(y);
                for other in &self.pieces {
                    let theirs = other.quad.eval(y);
                    if own > theirs + 1e-10 * (1.0 + own.abs().max(theirs.abs())) {
                        return fail(format!(
                            "piece {k} is not minimal at {y}: {own} > {theirs} ({})",
                            other.quad
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// One piece per line: `lo hi a b c i'`, with `-` when the piece has no generating index.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for piece in &self.pieces {
            let q = &piece.quad;
            let index = q.generating_index().map_or_else(|| "-".to_string(), |i| i.to_string());
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                piece.interval.lo, piece.interval.hi, q.a, q.b, q.c, index
            ));
        }
        out
    }
}

/// Sub-intervals of `piece.interval` on which `mu` is below `piece.quad` by more than the tie tolerance.
fn below_regions(mu: &Quadratic, piece: &Piece) -> [Option<Interval>; 2] {
    let p = &piece.quad;
    let (da, db, dc) = (mu.a - p.a, mu.b - p.b, mu.c - p.c);
    if difference_floor(da, db, dc, piece.interval) >= 0.0 {
        return [None, None];
    }
    let center = if da != 0.0 { -db / (2.0 * da) } else { 0.0 };
    negative_set(da, db, dc).map(|region| {
        let region = region?;
        let clipped = Interval::new(
            region.lo.max(piece.interval.lo),
            region.hi.min(piece.interval.hi),
        );
        if clipped.lo >= clipped.hi {
            return None;
        }
        let deep = clipped.probes(center).iter().any(|&y| {
            let (m, q) = (mu.eval(y), p.eval(y));
            m - q < -tie_tolerance(m, q)
        });
        deep.then_some(clipped)
    })
}

/// Lower bound of `da*y^2 + db*y + dc` over `iv`, or `-inf` when it is not cheap to get.
/// Most offers lose on most pieces; this skips root finding for them.
fn difference_floor(da: f64, db: f64, dc: f64, iv: Interval) -> f64 {
    let d = |y: f64| (da * y + db) * y + dc;
    if da > 0.0 {
        d((-db / (2.0 * da)).clamp(iv.lo, iv.hi))
    } else if iv.lo.is_finite() && iv.hi.is_finite() {
        d(iv.lo).min(d(iv.hi))
    } else if da == 0.0 && db == 0.0 {
        dc
    } else {
        f64::NEG_INFINITY
    }
}

/// Appends a segment, merging it into the previous one when they hold the same
/// quadratic and absorbing it when it is negligibly narrow.
fn push_segment(out: &mut Vec<Piece>, interval: Interval, quad: &Quadratic) {
    if let Some(last) = out.last_mut() {
        if last.interval.hi == interval.lo && last.quad.same_polynomial(quad) {
            last.interval.hi = interval.hi;
            return;
        }
        if interval.is_negligible() {
            last.interval.hi = interval.hi;
            return;
        }
        if last.interval.is_negligible() && out.len() > 1 {
            // A sliver left behind by the previous splice: fold it into its left neighbour.
            out.pop();
            let prev = out.last_mut().expect("len > 1");
            prev.interval.hi = interval.lo;
            push_segment(out, interval, quad);
            return;
        }
    }
    out.push(Piece { interval, quad: quad.clone() });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_of(qs: &[Quadratic]) -> Envelope {
        let mut env = Envelope::new();
        for q in qs {
            env.insert(q.clone()).unwrap();
            env.validate().unwrap();
        }
        env
    }

    #[test]
    fn single_piece_evaluates() {
        let env = env_of(&[Quadratic::new(1.0, 0.0, 1.0)]);
        assert_eq!(env.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(env.len(), 1);
    }

    #[test]
    fn symmetric_crossing() {
        let env = env_of(&[Quadratic::from_vertex(1.0, 0.0, 0.0), Quadratic::from_vertex(1.0, 2.0, 0.0)]);
        assert_eq!(env.len(), 2);
        assert_eq!(env.pieces()[0].interval, Interval::new(f64::NEG_INFINITY, 1.0));
        assert_eq!(env.pieces()[1].interval, Interval::new(1.0, f64::INFINITY));
        assert_eq!(env.evaluate(1.0).unwrap(), 1.0);
    }

    #[test]
    fn dominated_insert_leaves_envelope_unchanged() {
        let mut env = env_of(&[Quadratic::new(1.0, 0.0, 0.0)]);
        let kept = env.insert(Quadratic::new(1.0, 0.0, 5.0)).unwrap();
        assert!(!kept);
        assert_eq!(env.len(), 1);
        assert!(env.pieces()[0].quad.same_polynomial(&Quadratic::new(1.0, 0.0, 0.0)));
    }

    #[test]
    fn identical_insert_is_a_tie() {
        let mut env = env_of(&[Quadratic::new(2.0, 1.0, 0.5)]);
        assert!(!env.insert(Quadratic::new(2.0, 1.0, 0.5)).unwrap());
        assert_eq!(env.accepted(), 1);
        assert_eq!(env.offered(), 2);
    }

    #[test]
    fn rejects_non_convex() {
        let mut env = Envelope::new();
        assert!(matches!(env.insert(Quadratic::new(0.0, 1.0, 0.0)), Err(Error::InvalidInput(_))));
        assert!(matches!(env.insert(Quadratic::new(-1.0, 0.0, 0.0)), Err(Error::InvalidInput(_))));
        assert!(matches!(env.insert(Quadratic::new(f64::NAN, 0.0, 0.0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn empty_envelope_is_a_usage_error() {
        let env = Envelope::new();
        assert!(matches!(env.evaluate(0.0), Err(Error::Usage(_))));
        assert!(matches!(env.global_min(), Err(Error::Usage(_))));
    }

    #[test]
    fn interior_replacement() {
        // Wide shallow bowl p1 flanked by a steep bowl p2 on both sides;
        // mu undercuts p1 in the middle only.
        let p1 = Quadratic::new(1.7, 1.7, 3.425);
        let p2 = Quadratic::new(0.3, 1.0, 10.0);
        let mu = Quadratic::new(0.9, 1.44, 1.576);
        let mut env = env_of(&[p1.clone(), p2.clone()]);
        assert_eq!(env.len(), 3);
        let before: Vec<f64> = env.pieces().iter().map(|p| p.interval.hi).collect();
        assert!(env.insert(mu.clone()).unwrap());
        env.validate().unwrap();
        let holders: Vec<&Quadratic> = env.pieces().iter().map(|p| &p.quad).collect();
        assert_eq!(holders.len(), 3);
        assert!(holders[0].same_polynomial(&p2));
        assert!(holders[1].same_polynomial(&mu));
        assert!(holders[2].same_polynomial(&p2));
        // Both interior boundaries moved outwards.
        assert!(env.pieces()[0].interval.hi < before[0]);
        assert!(env.pieces()[1].interval.hi > before[1]);
        for k in -400..=400 {
            let y = k as f64 * 0.025;
            let want = p1.eval(y).min(p2.eval(y)).min(mu.eval(y));
            let got = env.evaluate(y).unwrap();
            assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "y={y}");
        }
    }

    #[test]
    fn intersect_cases() {
        let y2 = Quadratic::new(1.0, 0.0, 0.0);
        assert_eq!(intersect(&y2, &Quadratic::from_vertex(1.0, 2.0, 0.0)), Crossing::Single(1.0));
        assert_eq!(intersect(&y2, &Quadratic::new(2.0, 0.0, -1.0)), Crossing::Double(-1.0, 1.0));
        assert_eq!(intersect(&y2, &Quadratic::new(1.0, 0.0, 1.0)), Crossing::Parallel);
        assert_eq!(intersect(&y2, &y2.clone()), Crossing::Identical);
        assert_eq!(intersect(&y2, &Quadratic::new(2.0, 0.0, 1.0)), Crossing::Disjoint);
        assert_eq!(intersect(&y2, &Quadratic::new(2.0, 0.0, 0.0)), Crossing::Tangent(0.0));
    }

    #[test]
    fn global_min_vertex_and_ties() {
        let env = env_of(&[Quadratic::from_vertex(1.0, 3.0, 2.0)]);
        let m = env.global_min().unwrap();
        assert_eq!((m.y, m.value), (3.0, 2.0));

        let env = env_of(&[Quadratic::from_vertex(1.0, 2.0, 0.0), Quadratic::from_vertex(1.0, 0.0, 0.0)]);
        let m = env.global_min().unwrap();
        assert_eq!((m.y, m.value), (0.0, 0.0));
    }

    #[test]
    fn global_min_prefers_leftmost_tie() {
        let env = env_of(&[Quadratic::from_vertex(1.0, 1.0, 0.0), Quadratic::from_vertex(1.0, -1.0, 0.0)]);
        let m = env.global_min().unwrap();
        assert_eq!((m.y, m.value), (-1.0, 0.0));
    }

    #[test]
    fn dump_format() {
        let env = env_of(&[Quadratic::new(1.0, 0.0, 0.0), Quadratic::new(1.0, -4.0, 4.0)]);
        assert_eq!(env.dump(), "-inf 1 1 0 0 -\n1 inf 1 -4 4 -\n");
    }

    #[test]
    fn near_identical_insert_adds_no_sliver() {
        let p = Quadratic::new(1.0, 0.3, -0.2);
        let q = Quadratic::new(1.0 + 1e-15, 0.3, -0.2 - 1e-16);
        let mut env = env_of(&[p]);
        env.insert(q).unwrap();
        env.validate().unwrap();
        assert_eq!(env.len(), 1);
    }
}
