//! Leaky-bucket adversaries: types, budget enforcement and strategies.

mod budget;
mod script;
mod strategies;

use std::fmt;

use num_traits::{One, Zero};

pub use budget::{validate_counts, TokenBucket, WindowMonitor};
pub use script::{scripted, validate_script, AdversaryScript};
pub use strategies::{
    greedy_strategy, jrrw_tightness_strategy, mbtf_tightness_strategy, random_budgeted_strategy,
    targeted_burst_strategy, Targeting,
};

use crate::channel::Feedback;
use crate::rational::{floor_u64, format_rational, Rational};
use crate::{Error, Result, Round, StationId};

/// Injection rate `rho`, jamming rate `lambda` and burstiness `b`.
///
/// In every window of `t > 0` rounds at most `rho * t + b` packets are
/// injected and at most `lambda * t + b` rounds are jammed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdversaryType {
    pub rho: Rational,
    pub lambda: Rational,
    pub b: u64,
}

impl AdversaryType {
    pub fn new(rho: Rational, lambda: Rational, b: u64) -> Result<Self> {
        if rho < Rational::zero() || rho > Rational::one() {
            return Err(Error::Config(format!("rho must lie in [0, 1], got {}", format_rational(&rho))));
        }
        if lambda < Rational::zero() || lambda >= Rational::one() {
            return Err(Error::Config(format!("lambda must lie in [0, 1), got {}", format_rational(&lambda))));
        }
        Ok(Self { rho, lambda, b })
    }

    /// Whether `rho + lambda < 1`, the regime where latency bounds are finite.
    pub fn is_stable(&self) -> bool {
        self.rho + self.lambda < Rational::one()
    }

    /// Most packets injectable in one round: `⌊rho + b⌋`.
    pub fn injection_burstiness(&self) -> u64 {
        floor_u64(&(self.rho + Rational::from_integer(self.b as i128)))
    }

    /// Longest run of jammed rounds: `⌊b / (1 - lambda)⌋`.
    pub fn jamming_burstiness(&self) -> u64 {
        floor_u64(&(Rational::from_integer(self.b as i128) / (Rational::one() - self.lambda)))
    }

    pub fn injection_bucket(&self) -> TokenBucket {
        TokenBucket::new(self.rho, self.b)
    }

    pub fn jamming_bucket(&self) -> TokenBucket {
        TokenBucket::new(self.lambda, self.b)
    }
}

impl fmt::Display for AdversaryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", format_rational(&self.rho), format_rational(&self.lambda), self.b)
    }
}

/// An injection and jamming pattern, possibly reacting to public feedback.
pub trait Adversary: Send {
    /// Whether round `round` is jammed; decided before the round resolves.
    fn jam(&mut self, round: Round) -> bool;

    /// Stations receiving one packet each in step (c) of `round`, after the
    /// round's feedback is known. A station may appear several times.
    fn inject(&mut self, round: Round, feedback: &Feedback) -> Vec<StationId>;
}

pub struct AdversaryInstance {
    pub kind: AdversaryType,
    pub label: String,
    pub strategy: Box<dyn Adversary>,
}

impl AdversaryInstance {
    pub fn new(kind: AdversaryType, label: impl Into<String>, strategy: Box<dyn Adversary>) -> Self {
        Self { kind, label: label.into(), strategy }
    }
}

impl fmt::Debug for AdversaryInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdversaryInstance").field("kind", &self.kind).field("label", &self.label).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    #[test]
    fn burstiness_formulas() {
        let kind = AdversaryType::new(rational(1, 2), rational(1, 2), 3).unwrap();
        assert_eq!(kind.injection_burstiness(), 3);
        assert_eq!(kind.jamming_burstiness(), 6);
        assert!(!kind.is_stable());
        let kind = AdversaryType::new(rational(1, 4), rational(1, 4), 2).unwrap();
        assert!(kind.is_stable());
        assert_eq!(kind.jamming_burstiness(), 2);
    }

    #[test]
    fn rejects_out_of_range_rates() {
        assert!(AdversaryType::new(rational(3, 2), rational(0, 1), 1).is_err());
        assert!(AdversaryType::new(rational(1, 2), rational(1, 1), 1).is_err());
    }
}
