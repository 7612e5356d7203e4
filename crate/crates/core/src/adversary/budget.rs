//! Exact leaky-bucket accounting.
//!
//! A pattern obeys the budget `(rate, burst)` when every contiguous window of
//! `t > 0` rounds holds at most `rate * t + burst` events. Rates are rationals
//! `p/q`; all arithmetic is done on integers scaled by `q`.

use crate::error::{BudgetKind, BudgetViolation};
use crate::rational::Rational;
use crate::Round;

fn scaled(rate: Rational) -> (i128, i128) {
    (*rate.numer(), *rate.denom())
}

/// Online windowed check over a growing prefix.
///
/// With prefix sums `S_k`, the window `i..=k` is over budget iff
/// `D_k - D_{i-1} > q * burst` where `D_k = q * S_k - p * (k + 1)`. Keeping the
/// running minimum of `D` finds the worst window ending at each round, so the
/// check costs O(1) per round while still being the windowed definition.
#[derive(Debug, Clone)]
pub struct WindowMonitor {
    p: i128,
    q: i128,
    burst: i128,
    kind: BudgetKind,
    round: i128,
    total: i128,
    min_d: i128,
    min_at: i128,
    min_total: i128,
}

impl WindowMonitor {
    pub fn new(rate: Rational, burst: u64, kind: BudgetKind) -> Self {
        let (p, q) = scaled(rate);
        Self { p, q, burst: burst as i128, kind, round: 0, total: 0, min_d: 0, min_at: -1, min_total: 0 }
    }

    /// Adds the count for the next round.
    pub fn push(&mut self, count: u64) -> Result<(), BudgetViolation> {
        self.total += count as i128;
        let d = self.q * self.total - self.p * (self.round + 1);
        if d - self.min_d > self.q * self.burst {
            return Err(BudgetViolation {
                kind: self.kind,
                start: (self.min_at + 1) as Round,
                end: self.round as Round,
                count: (self.total - self.min_total) as u64,
            });
        }
        if d < self.min_d {
            self.min_d = d;
            self.min_at = self.round;
            self.min_total = self.total;
        }
        self.round += 1;
        Ok(())
    }
}

/// Checks a whole per-round count sequence against the windowed budget.
pub fn validate_counts(counts: &[u64], rate: Rational, burst: u64, kind: BudgetKind) -> Result<(), BudgetViolation> {
    let mut monitor = WindowMonitor::new(rate, burst, kind);
    counts.iter().try_for_each(|&c| monitor.push(c))
}

/// Token bucket equivalent to the windowed budget.
///
/// The resting level starts at `burst` and is capped at `burst`; at the start
/// of each round it gains `rate`, and whole units up to that level may be
/// spent in the round.
#[derive(Debug, Clone)]
pub struct TokenBucket {
    p: i128,
    q: i128,
    cap: i128,
    /// Resting level scaled by `q`.
    level: i128,
}

impl TokenBucket {
    pub fn new(rate: Rational, burst: u64) -> Self {
        let (p, q) = scaled(rate);
        let cap = burst as i128 * q;
        Self { p, q, cap, level: cap }
    }

    /// Whole units that may be spent in the current round.
    pub fn available(&self) -> u64 {
        ((self.level + self.p) / self.q).max(0) as u64
    }

    pub fn permits(&self, units: u64) -> bool {
        units <= self.available()
    }

    /// Spends `units` in the current round and moves to the next one.
    /// Returns `false`, leaving the bucket untouched, if not permitted.
    pub fn try_advance(&mut self, units: u64) -> bool {
        if !self.permits(units) {
            return false;
        }
        let after = self.level + self.p - units as i128 * self.q;
        self.level = after.min(self.cap);
        true
    }

    /// Like [`try_advance`](Self::try_advance) but spends at most what is available.
    pub fn spend_up_to(&mut self, units: u64) -> u64 {
        let spent = units.min(self.available());
        let ok = self.try_advance(spent);
        debug_assert!(ok);
        spent
    }
}
