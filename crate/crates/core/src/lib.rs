//! Round-exact simulation of deterministic broadcast algorithms on
//! adversarial multiple access channels.
//!
//! The crate is organised around the life of one execution:
//!
//! - [`channel`] resolves transmissions and jamming into the feedback every
//!   station perceives and drives the four-step round (transmit, feedback,
//!   inject, transition).
//! - [`algorithms`] holds the station-local state machines: round-robin
//!   withholding and its jamming/control variants, search round-robin and
//!   move-big-to-front, each with an older-go-first flavour where one exists.
//! - [`adversary`] enforces leaky-bucket injection and jamming budgets in
//!   exact rational arithmetic and ships scripted, greedy, seeded random and
//!   worst-case strategies.
//! - [`metrics`] derives latencies, queue occupancy, phases and the credit
//!   ledger from a finished trace and runs the progress checks.
//! - [`bounds`] evaluates the closed-form latency and queue bounds.
//! - [`experiment`] ties everything into configurable grids with CSV output.
//!
//! ```
//! use advmac::prelude::*;
//!
//! let algorithm = AlgorithmSpec::Rrw;
//! let config = algorithm.default_channel(3).unwrap();
//! let kind = AdversaryType::new(rational(1, 2), rational(0, 1), 1).unwrap();
//! let adversary = greedy_strategy(kind, Targeting::RoundRobin, algorithm, &config).unwrap();
//! let trace = run_simulation(&config, &algorithm.into(), adversary, 200).unwrap();
//! let latency = compute_latencies(&trace);
//! let bound = latency_bound(&algorithm, 3, &kind).unwrap();
//! assert!(bound.admits(latency.summary.max));
//! ```

pub mod adversary;
pub mod algorithms;
pub mod bounds;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod rational;

pub use error::{Error, Result};

/// Station name, always in `0..n`.
pub type StationId = usize;
/// Globally unique packet identifier, assigned at injection.
pub type PacketId = u64;
/// Round index, starting at zero.
pub type Round = u64;

pub mod prelude {
    pub use crate::adversary::{
        greedy_strategy, jrrw_tightness_strategy, mbtf_tightness_strategy, random_budgeted_strategy, scripted,
        targeted_burst_strategy, validate_script, Adversary, AdversaryInstance, AdversaryScript, AdversaryType,
        Targeting, TokenBucket,
    };
    pub use crate::algorithms::{AlgorithmInstance, AlgorithmSpec, Fault, MbtfVariant};
    pub use crate::bounds::{compare, latency_bound, queue_bound_mbtf, BoundResult, BoundValue};
    pub use crate::channel::{
        resolve_round, run_simulation, ChannelConfig, Feedback, OutboundMessage, RoundRecord, Trace,
    };
    pub use crate::metrics::{
        compute_latencies, credit_ledger, lemma_check, phase_stats, queue_occupancy, CheckOutcome, ProgressCheck,
    };
    pub use crate::rational::{rational, Rational};
    pub use crate::{PacketId, Round, StationId};
}
