//! Station-local state machines for the nine broadcast algorithms.
//!
//! Every algorithm splits into two parts. The [`Protocol`] is the shared
//! component (token holder, void counter, search stack, list order, phase
//! index): it is updated from channel feedback alone, so all stations hold
//! identical copies and an outside observer can replay it from a trace. The
//! [`StationView`] is the private part: the FIFO queue and the count of old
//! packets at its head.

mod mbtf;
mod search;
mod token_ring;

use std::collections::VecDeque;
use std::fmt;

pub use mbtf::MoveBigToFront;
pub use search::{SearchMode, SearchRoundRobin, Segment};
pub use token_ring::{PassRule, TokenRing};

use crate::channel::{ChannelConfig, Feedback, OutboundMessage};
use crate::{Error, PacketId, Result, StationId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MbtfVariant {
    /// An empty holder pauses and the silent round passes the token.
    Pausing,
    /// An empty holder sends a control-only message; void rounds are jams.
    ControlBits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmSpec {
    Rrw,
    OfRrw,
    Srr,
    OfSrr,
    Mbtf(MbtfVariant),
    Jrrw { j: u32 },
    OfJrrw { j: u32 },
    CRrw,
    OfcRrw,
}

/// Deliberate defects used to show that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fault {
    /// The jamming round-robin token moves after `J` void rounds instead of `J + 1`.
    ShortVoidRun,
}

impl Fault {
    pub fn id(&self) -> &'static str {
        match self {
            Fault::ShortVoidRun => "short-void-run",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgorithmInstance {
    pub spec: AlgorithmSpec,
    pub fault: Option<Fault>,
}

impl From<AlgorithmSpec> for AlgorithmInstance {
    fn from(spec: AlgorithmSpec) -> Self {
        Self { spec, fault: None }
    }
}

impl AlgorithmInstance {
    pub fn with_fault(spec: AlgorithmSpec, fault: Fault) -> Self {
        Self { spec, fault: Some(fault) }
    }

    /// The shared-state replica an observer of the channel would hold.
    pub fn observer(&self, n: usize) -> Protocol {
        let older_first = self.spec.older_first();
        match self.spec {
            AlgorithmSpec::Rrw | AlgorithmSpec::OfRrw => {
                Protocol::Ring(TokenRing::new(n, PassRule::Silence, older_first))
            }
            AlgorithmSpec::Jrrw { j } | AlgorithmSpec::OfJrrw { j } => {
                let threshold = match self.fault {
                    Some(Fault::ShortVoidRun) => j.max(1),
                    None => j + 1,
                };
                Protocol::Ring(TokenRing::new(n, PassRule::VoidRun { threshold }, older_first))
            }
            AlgorithmSpec::CRrw | AlgorithmSpec::OfcRrw => {
                Protocol::Ring(TokenRing::new(n, PassRule::Control, older_first))
            }
            AlgorithmSpec::Srr | AlgorithmSpec::OfSrr => Protocol::Search(SearchRoundRobin::new(n, older_first)),
            AlgorithmSpec::Mbtf(variant) => Protocol::Mbtf(MoveBigToFront::new(n, variant)),
        }
    }

    /// An observer that also tracks queue sizes from the injections it is told about.
    pub fn observe_queues(&self, n: usize) -> Observer {
        Observer { protocol: self.observer(n), queued: vec![0; n], old: vec![0; n], released: vec![false; n] }
    }

    pub fn spawn(&self, n: usize) -> Vec<Station> {
        let protocol = self.observer(n);
        (0..n).map(|name| Station { view: StationView::new(name), protocol: protocol.clone() }).collect()
    }
}

impl AlgorithmSpec {
    pub const IDS: [&'static str; 9] =
        ["rrw", "of-rrw", "srr", "of-srr", "mbtf", "jrrw", "of-jrrw", "c-rrw", "ofc-rrw"];

    /// Parses an identifier. `mbtf` resolves to the pausing variant on a
    /// jam-free channel and to the control-bit variant when `jamming` is set.
    pub fn parse(id: &str, j: Option<u32>, jamming: bool) -> Result<Self> {
        let need_j = || j.ok_or_else(|| Error::Config(format!("algorithm {id} requires the parameter J")));
        Ok(match id.trim().to_ascii_lowercase().as_str() {
            "rrw" => AlgorithmSpec::Rrw,
            "of-rrw" => AlgorithmSpec::OfRrw,
            "srr" => AlgorithmSpec::Srr,
            "of-srr" => AlgorithmSpec::OfSrr,
            "mbtf" if jamming => AlgorithmSpec::Mbtf(MbtfVariant::ControlBits),
            "mbtf" | "mbtf-pause" => AlgorithmSpec::Mbtf(MbtfVariant::Pausing),
            "mbtf-control" => AlgorithmSpec::Mbtf(MbtfVariant::ControlBits),
            "jrrw" => AlgorithmSpec::Jrrw { j: need_j()? },
            "of-jrrw" => AlgorithmSpec::OfJrrw { j: need_j()? },
            "c-rrw" => AlgorithmSpec::CRrw,
            "ofc-rrw" => AlgorithmSpec::OfcRrw,
            other => return Err(Error::Config(format!("unknown algorithm {other:?}"))),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmSpec::Rrw => "rrw",
            AlgorithmSpec::OfRrw => "of-rrw",
            AlgorithmSpec::Srr => "srr",
            AlgorithmSpec::OfSrr => "of-srr",
            AlgorithmSpec::Mbtf(_) => "mbtf",
            AlgorithmSpec::Jrrw { .. } => "jrrw",
            AlgorithmSpec::OfJrrw { .. } => "of-jrrw",
            AlgorithmSpec::CRrw => "c-rrw",
            AlgorithmSpec::OfcRrw => "ofc-rrw",
        }
    }

    pub fn j(&self) -> Option<u32> {
        match self {
            AlgorithmSpec::Jrrw { j } | AlgorithmSpec::OfJrrw { j } => Some(*j),
            _ => None,
        }
    }

    pub fn older_first(&self) -> bool {
        matches!(
            self,
            AlgorithmSpec::OfRrw | AlgorithmSpec::OfSrr | AlgorithmSpec::OfJrrw { .. } | AlgorithmSpec::OfcRrw
        )
    }

    pub fn is_phase_algorithm(&self) -> bool {
        !matches!(self, AlgorithmSpec::Mbtf(_))
    }

    /// The round-robin family whose token visits stations in name order.
    pub fn is_round_robin(&self) -> bool {
        matches!(
            self,
            AlgorithmSpec::Rrw
                | AlgorithmSpec::OfRrw
                | AlgorithmSpec::Jrrw { .. }
                | AlgorithmSpec::OfJrrw { .. }
                | AlgorithmSpec::CRrw
                | AlgorithmSpec::OfcRrw
        )
    }

    /// The channel each algorithm is designed for.
    pub fn default_channel(&self, n: usize) -> Result<ChannelConfig> {
        let (jam, cd) = match self {
            AlgorithmSpec::Rrw | AlgorithmSpec::OfRrw => (false, false),
            AlgorithmSpec::Srr | AlgorithmSpec::OfSrr => (false, true),
            AlgorithmSpec::Mbtf(MbtfVariant::Pausing) => (false, false),
            AlgorithmSpec::Mbtf(MbtfVariant::ControlBits) => (true, false),
            AlgorithmSpec::Jrrw { .. } | AlgorithmSpec::OfJrrw { .. } | AlgorithmSpec::CRrw | AlgorithmSpec::OfcRrw => {
                (true, false)
            }
        };
        ChannelConfig::new(n, jam, cd)
    }

    pub fn check_channel(&self, config: &ChannelConfig) -> Result<()> {
        match self {
            AlgorithmSpec::Srr | AlgorithmSpec::OfSrr if !config.collision_detection => {
                Err(Error::Config(format!("{} requires collision detection", self.id())))
            }
            AlgorithmSpec::Srr | AlgorithmSpec::OfSrr | AlgorithmSpec::Rrw | AlgorithmSpec::OfRrw
                if config.jamming_enabled =>
            {
                Err(Error::Config(format!("{} is specified for channels without jamming", self.id())))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::Jrrw { j } | AlgorithmSpec::OfJrrw { j } => write!(f, "{}({j})", self.id()),
            AlgorithmSpec::Mbtf(MbtfVariant::Pausing) => f.write_str("mbtf-pause"),
            AlgorithmSpec::Mbtf(MbtfVariant::ControlBits) => f.write_str("mbtf-control"),
            _ => f.write_str(self.id()),
        }
    }
}

/// One station's private state: its FIFO queue, the old packets at its head
/// forming a prefix of length `old`, and whether it has released the token it
/// still nominally holds (void-run rule only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationView {
    pub name: StationId,
    pub queue: VecDeque<PacketId>,
    pub old: usize,
    pub released: bool,
}

impl StationView {
    pub fn new(name: StationId) -> Self {
        Self { name, queue: VecDeque::new(), old: 0, released: false }
    }

    pub fn eligible(&self, older_first: bool) -> usize {
        if older_first {
            self.old
        } else {
            self.queue.len()
        }
    }

    fn packet_message(&self, older_first: bool) -> Option<OutboundMessage> {
        if self.eligible(older_first) == 0 {
            return None;
        }
        self.queue.front().map(|&id| OutboundMessage::packet(self.name, id))
    }
}

/// Shared, feedback-driven component of an algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Protocol {
    Ring(TokenRing),
    Search(SearchRoundRobin),
    Mbtf(MoveBigToFront),
}

impl Protocol {
    pub fn decide(&self, view: &StationView) -> Option<OutboundMessage> {
        match self {
            Protocol::Ring(p) => p.decide(view),
            Protocol::Search(p) => p.decide(view),
            Protocol::Mbtf(p) => p.decide(view),
        }
    }

    /// Applies one round of feedback. Returns `true` when the round closed a phase.
    pub fn observe(&mut self, feedback: &Feedback) -> bool {
        match self {
            Protocol::Ring(p) => p.observe(feedback),
            Protocol::Search(p) => p.observe(feedback),
            Protocol::Mbtf(p) => p.observe(feedback),
        }
    }

    /// The station the token is at, or the unloading station during a search.
    pub fn holder(&self) -> Option<StationId> {
        match self {
            Protocol::Ring(p) => Some(p.holder),
            Protocol::Search(p) => p.unloading(),
            Protocol::Mbtf(p) => Some(p.holder()),
        }
    }

    /// A cyclic position describing where service currently is, for
    /// adversaries that target the station just behind it.
    pub fn cursor(&self) -> StationId {
        match self {
            Protocol::Ring(p) => p.holder,
            Protocol::Search(p) => p.cursor(),
            Protocol::Mbtf(p) => p.holder(),
        }
    }

    /// The station served immediately before the cursor.
    pub fn behind_cursor(&self) -> StationId {
        match self {
            Protocol::Mbtf(p) => p.behind_holder(),
            other => {
                let n = other.n();
                (other.cursor() + n - 1) % n
            }
        }
    }

    /// Whether `station`, holding `queued` packets of which `old` are old,
    /// transmits in the coming round.
    pub fn transmits(&self, station: StationId, queued: usize, old: usize) -> bool {
        let eligible = if self.older_first() { old } else { queued };
        match self {
            Protocol::Ring(p) => p.holder == station && (eligible > 0 || p.rule == PassRule::Control),
            Protocol::Search(p) => p.addresses(station) && eligible > 0,
            Protocol::Mbtf(p) => p.holder() == station && (queued > 0 || p.variant == MbtfVariant::ControlBits),
        }
    }

    /// Whether `station` pausing now, with `eligible` packets, releases the
    /// token (see [`TokenRing::releases_on_pause`]).
    fn pauses_for_good(&self, station: StationId, eligible: usize) -> bool {
        matches!(self, Protocol::Ring(p) if p.releases_on_pause() && p.holder == station && eligible == 0)
    }

    /// Whether the round just observed moved the token away from its holder.
    fn token_moved(&self, feedback: &Feedback) -> bool {
        matches!(self, Protocol::Ring(p) if p.just_moved(feedback))
    }

    pub fn phase(&self) -> u64 {
        match self {
            Protocol::Ring(p) => p.phase,
            Protocol::Search(p) => p.phase,
            Protocol::Mbtf(_) => 0,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Protocol::Ring(p) => p.n,
            Protocol::Search(p) => p.n,
            Protocol::Mbtf(p) => p.n,
        }
    }

    pub fn older_first(&self) -> bool {
        match self {
            Protocol::Ring(p) => p.older_first,
            Protocol::Search(p) => p.older_first,
            Protocol::Mbtf(_) => false,
        }
    }
}

/// Replica of every station built from public feedback plus the injections:
/// shared protocol state, queue sizes and old-packet counts.
///
/// Per round, call [`observe`](Self::observe) with the feedback, then
/// [`enqueue`](Self::enqueue) for each injection, then
/// [`graduate`](Self::graduate) with the value `observe` returned. This
/// mirrors [`Station::step`] exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observer {
    pub protocol: Protocol,
    pub queued: Vec<usize>,
    pub old: Vec<usize>,
    pub released: Vec<bool>,
}

impl Observer {
    pub fn n(&self) -> usize {
        self.queued.len()
    }

    /// Removes the heard packet and updates the protocol; returns whether a phase ended.
    pub fn observe(&mut self, feedback: &Feedback) -> bool {
        if let Some(holder) = self.protocol.holder() {
            let eligible = if self.protocol.older_first() { self.old[holder] } else { self.queued[holder] };
            if self.protocol.pauses_for_good(holder, eligible) {
                self.released[holder] = true;
            }
        }
        if let Some((sender, _)) = feedback.heard_packet() {
            self.queued[sender] -= 1;
            self.old[sender] = self.old[sender].saturating_sub(1);
        }
        let phase_ended = self.protocol.observe(feedback);
        if self.protocol.token_moved(feedback) {
            self.released.fill(false);
        }
        phase_ended
    }

    pub fn enqueue(&mut self, station: StationId) {
        self.queued[station] += 1;
    }

    pub fn graduate(&mut self, phase_ended: bool) {
        if phase_ended {
            self.old.copy_from_slice(&self.queued);
        }
    }

    pub fn transmits(&self, station: StationId) -> bool {
        !self.released[station] && self.protocol.transmits(station, self.queued[station], self.old[station])
    }

    /// Whether anybody transmits in the coming round.
    pub fn anyone_transmits(&self) -> bool {
        match (&self.protocol, self.protocol.holder()) {
            (Protocol::Search(_), _) | (_, None) => (0..self.n()).any(|s| self.transmits(s)),
            (_, Some(holder)) => self.transmits(holder),
        }
    }

    pub fn total_queued(&self) -> usize {
        self.queued.iter().sum()
    }

    pub fn total_old(&self) -> usize {
        self.old.iter().sum()
    }
}

/// A station: private view plus its copy of the shared protocol state.
#[derive(Debug, Clone)]
pub struct Station {
    pub view: StationView,
    pub protocol: Protocol,
}

impl Station {
    pub fn act(&self) -> Option<OutboundMessage> {
        self.protocol.decide(&self.view)
    }

    /// Step (d): enqueue injections, drop the packet that was heard, update
    /// the shared state and graduate new packets at a phase boundary.
    pub fn step(&mut self, feedback: &Feedback, injected: &[PacketId]) {
        let older_first = self.protocol.older_first();
        if self.protocol.pauses_for_good(self.view.name, self.view.eligible(older_first)) {
            self.view.released = true;
        }
        self.view.queue.extend(injected.iter().copied());
        if let Some((sender, id)) = feedback.heard_packet() {
            if sender == self.view.name {
                let head = self.view.queue.pop_front();
                debug_assert_eq!(head, Some(id), "heard packet must be the head of its queue");
                self.view.old = self.view.old.saturating_sub(1);
            }
        }
        if self.protocol.observe(feedback) {
            self.view.old = self.view.queue.len();
        }
        if self.protocol.token_moved(feedback) {
            self.view.released = false;
        }
    }
}
