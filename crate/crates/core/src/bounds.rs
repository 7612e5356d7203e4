//! Closed-form latency and queue bounds with explicit constants.
//!
//! Write `ε = 1 - rho - lambda` and `μ = 1 - lambda`. All values are exact
//! rationals; the only rounding is `lg n = ⌈log2 n⌉`.

use std::fmt::{self, Write as _};

use num_traits::{One, ToPrimitive, Zero};

use crate::adversary::AdversaryType;
use crate::algorithms::{AlgorithmSpec, MbtfVariant};
use crate::rational::{format_rational, integer, lg, Rational};
use crate::{Error, Result};

/// Additive constant of the move-big-to-front latency bound, in units of `bn/μ`.
pub const MBTF_LATENCY_K: u64 = 8;
/// Additive constant of the move-big-to-front queue bound, in units of `bn`.
pub const MBTF_QUEUE_K: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Finite(Rational),
    /// `rho + lambda >= 1`.
    Unbounded,
    /// The configuration is outside the bound's hypotheses.
    NotApplicable(String),
}

impl BoundValue {
    pub fn finite(&self) -> Option<Rational> {
        match self {
            BoundValue::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Finite(v) => f.write_str(&format_rational(v)),
            BoundValue::Unbounded => f.write_str("unbounded"),
            BoundValue::NotApplicable(why) => write!(f, "not-applicable ({why})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Latency,
    Queue,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Latency => "latency",
            BoundKind::Queue => "queue",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub algorithm: String,
    pub kind: BoundKind,
    pub value: BoundValue,
    /// Which result the value comes from and the formula evaluated.
    pub provenance: String,
    /// A second, looser form of the same bound, reported alongside.
    pub alternate: Option<(String, BoundValue)>,
}

impl BoundResult {
    /// Whether an observed value is within the bound. Unbounded and
    /// inapplicable bounds make no claim and admit everything.
    pub fn admits(&self, observed: u64) -> bool {
        match &self.value {
            BoundValue::Finite(v) => integer(observed) <= *v,
            _ => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.value, BoundValue::Finite(_))
    }
}

fn build(spec: &AlgorithmSpec, kind: BoundKind, value: BoundValue, provenance: impl Into<String>) -> BoundResult {
    BoundResult { algorithm: spec.to_string(), kind, value, provenance: provenance.into(), alternate: None }
}

/// Packet latency bound of `spec` on `n` stations against `adversary`.
pub fn latency_bound(spec: &AlgorithmSpec, n: usize, adversary: &AdversaryType) -> Result<BoundResult> {
    if n == 0 {
        return Err(Error::Config("a channel needs at least one station".into()));
    }
    let one = Rational::one();
    let rho = adversary.rho;
    let lambda = adversary.lambda;
    let b = integer(adversary.b);
    let nn = integer(n as u64);
    let eps = one - rho - lambda;
    let mu = one - lambda;
    let latency = |value, provenance: &str| Ok(build(spec, BoundKind::Latency, value, provenance));

    let jam_free = matches!(
        spec,
        AlgorithmSpec::Rrw
            | AlgorithmSpec::OfRrw
            | AlgorithmSpec::Srr
            | AlgorithmSpec::OfSrr
            | AlgorithmSpec::Mbtf(MbtfVariant::Pausing)
    );
    if jam_free && !lambda.is_zero() {
        return latency(
            BoundValue::NotApplicable(format!("{spec} is analysed for channels without jamming")),
            "no bound with jamming",
        );
    }
    if !adversary.is_stable() {
        return latency(BoundValue::Unbounded, "rho + lambda >= 1");
    }

    match *spec {
        AlgorithmSpec::OfJrrw { j } | AlgorithmSpec::Jrrw { j } => {
            let burst = adversary.jamming_burstiness();
            if burst > u64::from(j) {
                return latency(
                    BoundValue::NotApplicable(format!("jamming burstiness {burst} exceeds J = {j}")),
                    "needs floor(b/(1-lambda)) <= J",
                );
            }
            let jj = integer(u64::from(j));
            let j_form = integer(2) * (nn * (jj + one) + integer(2) * b) / eps;
            let j_free = integer(4) * (b * nn + (nn + b) * mu) / (mu * eps);
            let older_first = matches!(spec, AlgorithmSpec::OfJrrw { .. });
            let (value, alt, provenance, alt_label) = if older_first {
                (
                    j_form,
                    j_free,
                    "older-first jamming round-robin: 2(n(J+1)+2b)/(1-rho-lambda)",
                    "4(bn+(n+b)(1-lambda))/((1-lambda)(1-rho-lambda))",
                )
            } else {
                (
                    j_form / eps,
                    j_free / eps,
                    "jamming round-robin: 2(n(J+1)+2b)/(1-rho-lambda)^2",
                    "4(bn+(n+b)(1-lambda))/((1-lambda)(1-rho-lambda)^2)",
                )
            };
            let mut result = build(spec, BoundKind::Latency, BoundValue::Finite(value), provenance);
            result.alternate = Some((alt_label.into(), BoundValue::Finite(alt)));
            Ok(result)
        }
        AlgorithmSpec::OfcRrw | AlgorithmSpec::OfRrw => latency(
            BoundValue::Finite(integer(4) * (nn + b) / eps),
            "older-first round-robin (control or withholding): 4(n+b)/(1-rho-lambda)",
        ),
        AlgorithmSpec::CRrw | AlgorithmSpec::Rrw => latency(
            BoundValue::Finite(integer(4) * (nn + b) / (eps * eps)),
            "round-robin (control or withholding): 4(n+b)/(1-rho-lambda)^2",
        ),
        AlgorithmSpec::Mbtf(_) => latency(
            BoundValue::Finite(integer(3) * nn * (nn + b) / (mu * eps) + integer(MBTF_LATENCY_K) * b * nn / mu),
            &format!("move-big-to-front: 3n(n+b)/((1-lambda)(1-rho-lambda)) + {MBTF_LATENCY_K}bn/(1-lambda)"),
        ),
        AlgorithmSpec::OfSrr | AlgorithmSpec::Srr => {
            if n < 2 {
                return latency(BoundValue::NotApplicable("search needs n >= 2".into()), "lg n = 0");
            }
            let lg_n = integer(u64::from(lg(n)));
            let small = rho <= one / (integer(2) * lg_n);
            let older_first = matches!(spec, AlgorithmSpec::OfSrr);
            let (value, provenance) = match (older_first, small) {
                (true, true) => {
                    (integer(4) * (b * lg_n).min(nn + b), "older-first search, rho <= 1/(2 lg n): 4 min(b lg n, n+b)")
                }
                (true, false) => {
                    (integer(2) * (integer(2) * nn + b) / (one - rho), "older-first search: (4n+2b)/(1-rho)")
                }
                (false, true) => (integer(6) * b * lg_n, "search, rho <= 1/(2 lg n): 6b lg n"),
                (false, false) => (integer(4) * (nn + b) / ((one - rho) * (one - rho)), "search: 4(n+b)/(1-rho)^2"),
            };
            latency(BoundValue::Finite(value), provenance)
        }
    }
}

/// Bound on the total number of queued packets under move-big-to-front.
pub fn queue_bound_mbtf(n: usize, adversary: &AdversaryType) -> Result<BoundResult> {
    if n == 0 {
        return Err(Error::Config("a channel needs at least one station".into()));
    }
    let spec =
        AlgorithmSpec::Mbtf(if adversary.lambda.is_zero() { MbtfVariant::Pausing } else { MbtfVariant::ControlBits });
    let provenance = format!("move-big-to-front queues: 2 rho n(n+b)/((1-lambda)(1-rho-lambda)) + {MBTF_QUEUE_K}bn");
    if !adversary.is_stable() {
        return Ok(build(&spec, BoundKind::Queue, BoundValue::Unbounded, provenance));
    }
    let one = Rational::one();
    let nn = integer(n as u64);
    let b = integer(adversary.b);
    let value = integer(2) * adversary.rho * nn * (nn + b)
        / ((one - adversary.lambda) * (one - adversary.rho - adversary.lambda))
        + integer(MBTF_QUEUE_K) * b * nn;
    Ok(build(&spec, BoundKind::Queue, BoundValue::Finite(value), provenance))
}

/// Observed value against a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub observed: u64,
    pub bound: BoundValue,
    /// `observed / bound` for finite bounds.
    pub ratio: Option<f64>,
}

impl Comparison {
    pub fn within(&self) -> bool {
        match &self.bound {
            BoundValue::Finite(v) => integer(self.observed) <= *v,
            _ => true,
        }
    }
}

/// Fails on a finite bound of zero, which cannot be a ratio denominator.
pub fn compare(observed: u64, bound: &BoundResult) -> Result<Comparison> {
    let ratio = match &bound.value {
        BoundValue::Finite(v) if v.is_zero() => {
            return Err(Error::InvalidInput(format!("bound for {} is zero", bound.algorithm)))
        }
        BoundValue::Finite(v) => Some((integer(observed) / v).to_f64().unwrap_or(f64::INFINITY)),
        _ => None,
    };
    Ok(Comparison { observed, bound: bound.value.clone(), ratio })
}

/// One row per algorithm: the asymptotic statement, the explicit formula and
/// its value for the given parameters.
pub fn bound_table_csv(n: usize, adversary: &AdversaryType, j: u32) -> Result<String> {
    let rows: [(AlgorithmSpec, &str, &str); 10] = [
        (AlgorithmSpec::OfRrw, "no jamming", "O((n+b)/(1-rho))"),
        (AlgorithmSpec::Rrw, "no jamming", "O((n+b)/(1-rho)^2)"),
        (AlgorithmSpec::OfSrr, "no jamming, collision detection", "4 min(b lg n, n+b) | (4n+2b)/(1-rho)"),
        (AlgorithmSpec::Srr, "no jamming, collision detection", "6b lg n | 4(n+b)/(1-rho)^2"),
        (AlgorithmSpec::Mbtf(MbtfVariant::Pausing), "no jamming", "O(n(n+b)/(1-rho))"),
        (AlgorithmSpec::OfJrrw { j }, "jamming", "O(bn/((1-lambda)(1-rho-lambda)))"),
        (AlgorithmSpec::Jrrw { j }, "jamming", "O(bn/((1-lambda)(1-rho-lambda)^2))"),
        (AlgorithmSpec::OfcRrw, "jamming", "O((n+b)/(1-rho-lambda))"),
        (AlgorithmSpec::CRrw, "jamming", "O((n+b)/(1-rho-lambda)^2)"),
        (AlgorithmSpec::Mbtf(MbtfVariant::ControlBits), "jamming", "O(n(n+b)/((1-lambda)(1-rho-lambda)))"),
    ];
    let mut out = String::from("algorithm,channel,asymptotic,formula,value,alternate_formula,alternate_value\n");
    for (spec, channel, asymptotic) in rows {
        let bound = latency_bound(&spec, n, adversary)?;
        let (alt_formula, alt_value) = match &bound.alternate {
            Some((f, v)) => (f.clone(), v.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{spec},{channel},{asymptotic},{},{},{alt_formula},{alt_value}",
            bound.provenance, bound.value
        );
    }
    let queue = queue_bound_mbtf(n, adversary)?;
    let _ = writeln!(
        out,
        "mbtf queue,any,2 rho n(n+b)/((1-lambda)(1-rho-lambda)) + O(bn),{},{},,",
        queue.provenance, queue.value
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    fn kind(rho: (i128, i128), lambda: (i128, i128), b: u64) -> AdversaryType {
        AdversaryType::new(rational(rho.0, rho.1), rational(lambda.0, lambda.1), b).unwrap()
    }

    #[test]
    fn ofc_rrw_example() {
        let bound = latency_bound(&AlgorithmSpec::OfcRrw, 8, &kind((1, 4), (1, 4), 2)).unwrap();
        assert_eq!(bound.value, BoundValue::Finite(integer(80)));
    }

    #[test]
    fn of_srr_small_rate_example() {
        let bound = latency_bound(&AlgorithmSpec::OfSrr, 16, &kind((1, 16), (0, 1), 3)).unwrap();
        assert_eq!(bound.value, BoundValue::Finite(integer(48)));
    }

    #[test]
    fn saturated_rates_are_unbounded() {
        for spec in [AlgorithmSpec::CRrw, AlgorithmSpec::OfJrrw { j: 9 }, AlgorithmSpec::Mbtf(MbtfVariant::ControlBits)]
        {
            let bound = latency_bound(&spec, 4, &kind((1, 2), (1, 2), 1)).unwrap();
            assert_eq!(bound.value, BoundValue::Unbounded);
        }
        assert_eq!(
            latency_bound(&AlgorithmSpec::Rrw, 4, &kind((1, 1), (0, 1), 1)).unwrap().value,
            BoundValue::Unbounded
        );
    }

    #[test]
    fn jrrw_needs_j_at_least_the_jamming_burstiness() {
        let k = kind((1, 4), (1, 2), 2);
        let bound = latency_bound(&AlgorithmSpec::OfJrrw { j: 3 }, 4, &k).unwrap();
        assert!(matches!(bound.value, BoundValue::NotApplicable(_)));
        let bound = latency_bound(&AlgorithmSpec::OfJrrw { j: 4 }, 4, &k).unwrap();
        // 2(4*5 + 4)/(1/4) = 192; J-free: 4(8 + 6/2)/((1/2)(1/4)) = 352
        assert_eq!(bound.value, BoundValue::Finite(integer(192)));
        assert_eq!(bound.alternate.unwrap().1, BoundValue::Finite(integer(352)));
        let plain = latency_bound(&AlgorithmSpec::Jrrw { j: 4 }, 4, &k).unwrap();
        assert_eq!(plain.value, BoundValue::Finite(integer(768)));
    }

    #[test]
    fn compare_guards_zero_and_reports_ratio() {
        let bound = latency_bound(&AlgorithmSpec::OfcRrw, 8, &kind((1, 4), (1, 4), 2)).unwrap();
        let row = compare(0, &bound).unwrap();
        assert_eq!(row.ratio, Some(0.0));
        assert_eq!(compare(40, &bound).unwrap().ratio, Some(0.5));
        let mut broken = bound.clone();
        broken.value = BoundValue::Finite(Rational::zero());
        assert!(compare(1, &broken).is_err());
        let unbounded = BoundResult { value: BoundValue::Unbounded, ..bound };
        assert_eq!(compare(7, &unbounded).unwrap().ratio, None);
    }

    #[test]
    fn mbtf_queue_bound_without_injection_rate() {
        let bound = queue_bound_mbtf(5, &kind((0, 1), (0, 1), 3)).unwrap();
        assert_eq!(bound.value, BoundValue::Finite(integer(MBTF_QUEUE_K * 15)));
    }

    #[test]
    fn jam_free_algorithms_refuse_jamming_rates() {
        let bound = latency_bound(&AlgorithmSpec::Rrw, 4, &kind((1, 4), (1, 4), 1)).unwrap();
        assert!(matches!(bound.value, BoundValue::NotApplicable(_)));
        assert!(bound.admits(u64::MAX));
    }
}
