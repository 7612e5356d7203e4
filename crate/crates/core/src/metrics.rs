//! Measurements derived from a finished trace.
//!
//! Everything here is a pure function of the [`Trace`]: the shared protocol
//! state is replayed from the recorded feedback and the queue sizes from the
//! recorded injections, exactly as an outside observer of the channel would.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::algorithms::{AlgorithmSpec, Observer, Protocol};
use crate::channel::{RoundRecord, Trace};
use crate::rational::lg;
use crate::{Error, PacketId, Result, Round, StationId};

/// Walks the trace, handing the visitor each record together with the
/// observer state at the start of that round. Returns the final state.
pub fn replay(trace: &Trace, mut visit: impl FnMut(&RoundRecord, &Observer)) -> Observer {
    let mut observer = trace.algorithm.observe_queues(trace.config.n);
    for record in &trace.records {
        visit(record, &observer);
        let ended = observer.observe(&record.feedback);
        for &(station, _) in &record.injections {
            observer.enqueue(station);
        }
        observer.graduate(ended);
    }
    observer
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketStats {
    pub packet: PacketId,
    pub station: StationId,
    pub injected: Round,
    pub heard: Option<Round>,
}

impl PacketStats {
    pub fn latency(&self) -> Option<u64> {
        self.heard.map(|h| h - self.injected)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LatencySummary {
    /// Heard packets.
    pub count: usize,
    pub max: u64,
    pub mean: f64,
    /// Latency value to number of heard packets with that latency.
    pub histogram: BTreeMap<u64, u64>,
    /// Packets still queued at the horizon.
    pub pending: usize,
    /// Largest `horizon - injected` over pending packets: a lower bound on
    /// the latency they will eventually have.
    pub max_pending_age: u64,
}

impl LatencySummary {
    /// The largest latency the trace proves, counting pending packets.
    pub fn worst(&self) -> u64 {
        self.max.max(self.max_pending_age)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LatencyReport {
    /// Every injected packet in id order.
    pub packets: Vec<PacketStats>,
    pub summary: LatencySummary,
}

impl LatencyReport {
    pub fn heard(&self) -> impl Iterator<Item = &PacketStats> {
        self.packets.iter().filter(|p| p.heard.is_some())
    }

    pub fn unheard(&self) -> impl Iterator<Item = &PacketStats> {
        self.packets.iter().filter(|p| p.heard.is_none())
    }

    /// `packet_id,station,injected,heard,latency`; unheard packets leave the
    /// last two fields empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("packet_id,station,injected,heard,latency\n");
        for p in &self.packets {
            let _ = write!(out, "{},{},{},", p.packet, p.station, p.injected);
            match p.heard {
                Some(h) => {
                    let _ = writeln!(out, "{h},{}", h - p.injected);
                }
                None => out.push_str(",\n"),
            }
        }
        out
    }
}

pub fn compute_latencies(trace: &Trace) -> LatencyReport {
    let mut packets: Vec<PacketStats> = Vec::new();
    for record in &trace.records {
        for &(station, packet) in &record.injections {
            debug_assert_eq!(packet as usize, packets.len(), "packet ids are sequential");
            packets.push(PacketStats { packet, station, injected: record.round, heard: None });
        }
        if let Some((_, packet)) = record.feedback.heard_packet() {
            packets[packet as usize].heard = Some(record.round);
        }
    }

    let mut summary = LatencySummary::default();
    let mut total = 0u128;
    let horizon = trace.horizon();
    for p in &packets {
        match p.latency() {
            Some(latency) => {
                summary.count += 1;
                summary.max = summary.max.max(latency);
                total += u128::from(latency);
                *summary.histogram.entry(latency).or_default() += 1;
            }
            None => {
                summary.pending += 1;
                summary.max_pending_age = summary.max_pending_age.max(horizon - p.injected);
            }
        }
    }
    if summary.count > 0 {
        summary.mean = total as f64 / summary.count as f64;
    }
    LatencyReport { packets, summary }
}

/// Queue sizes at the end of every round, after that round's injections.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueueOccupancy {
    pub totals: Vec<u64>,
    /// `per_station[station][round]`.
    pub per_station: Vec<Vec<u32>>,
}

impl QueueOccupancy {
    pub fn max_total(&self) -> u64 {
        self.totals.iter().copied().max().unwrap_or(0)
    }
}

pub fn queue_occupancy(trace: &Trace) -> QueueOccupancy {
    let n = trace.config.n;
    let h = trace.records.len();
    let mut sizes = vec![0u32; n];
    let mut occupancy = QueueOccupancy { totals: Vec::with_capacity(h), per_station: vec![Vec::with_capacity(h); n] };
    let mut total = 0u64;
    for record in &trace.records {
        if let Some((sender, _)) = record.feedback.heard_packet() {
            sizes[sender] -= 1;
            total -= 1;
        }
        for &(station, _) in &record.injections {
            sizes[station] += 1;
            total += 1;
        }
        occupancy.totals.push(total);
        for (series, &size) in occupancy.per_station.iter_mut().zip(&sizes) {
            series.push(size);
        }
    }
    occupancy
}

/// Largest end-of-round total queue, without keeping the per-station series.
pub fn max_total_queue(trace: &Trace) -> u64 {
    let mut total = 0u64;
    let mut max = 0;
    for record in &trace.records {
        if record.feedback.heard_packet().is_some() {
            total -= 1;
        }
        total += record.injections.len() as u64;
        max = max.max(total);
    }
    max
}

/// One full token cycle, or one sweep of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseStats {
    pub index: u64,
    pub start: Round,
    /// Last round of the phase, inclusive.
    pub end: Round,
    pub length: u64,
    /// Packets queued when the phase starts. These are exactly the old
    /// packets for the older-go-first versions.
    pub queued_at_start: u64,
    /// Packets queued right after the last round; the next phase's
    /// `queued_at_start`.
    pub queued_at_end: u64,
    /// False for the phase cut off by the horizon.
    pub complete: bool,
}

pub fn phase_stats(trace: &Trace) -> Result<Vec<PhaseStats>> {
    if !trace.algorithm.spec.is_phase_algorithm() {
        return Err(Error::Unsupported(format!("{} has no phases", trace.algorithm.spec)));
    }
    let mut phases = Vec::new();
    let mut current =
        PhaseStats { index: 0, start: 0, end: 0, length: 0, queued_at_start: 0, queued_at_end: 0, complete: false };
    let last = replay(trace, |record, observer| {
        let phase = observer.protocol.phase();
        if phase != current.index {
            let queued = observer.total_queued() as u64;
            current.end = record.round - 1;
            current.length = current.end - current.start + 1;
            current.queued_at_end = queued;
            current.complete = true;
            phases.push(current);
            current = PhaseStats {
                index: phase,
                start: record.round,
                end: record.round,
                length: 0,
                queued_at_start: queued,
                queued_at_end: 0,
                complete: false,
            };
        }
    });
    if !trace.records.is_empty() {
        current.end = trace.horizon() - 1;
        current.length = current.end - current.start + 1;
        current.queued_at_end = last.total_queued() as u64;
        current.complete = last.protocol.phase() != current.index;
        phases.push(current);
    }
    Ok(phases)
}

/// Checks `q_{i+1} <= rho * t_i + b` on every complete phase.
pub fn phase_recurrence_check(trace: &Trace) -> Result<CheckOutcome> {
    let kind = trace.adversary;
    let mut checked = 0;
    for phase in phase_stats(trace)?.iter().filter(|p| p.complete) {
        let limit = kind.rho * crate::rational::integer(phase.length) + crate::rational::integer(kind.b);
        checked += 1;
        if crate::rational::integer(phase.queued_at_end) > limit {
            return Ok(CheckOutcome::Counterexample {
                round: phase.end,
                details: format!(
                    "phase {} of length {} leaves {} packets, more than rho*t+b = {}",
                    phase.index,
                    phase.length,
                    phase.queued_at_end,
                    crate::rational::format_rational(&limit)
                ),
            });
        }
    }
    Ok(CheckOutcome::Pass { checked })
}

/// Older-go-first delivery: every packet is heard no later than the phase
/// after the one it is injected in. Injections arrive at the end of a round,
/// so the phase they belong to can be read two ways; both are checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPhaseCheck {
    /// Phase of the injection round itself.
    pub by_injection_round: CheckOutcome,
    /// Phase of the first round in which the packet can be transmitted.
    pub by_next_round: CheckOutcome,
}

impl TwoPhaseCheck {
    pub fn agree(&self) -> bool {
        self.by_injection_round.passed() == self.by_next_round.passed()
    }
}

pub fn two_phase_check(trace: &Trace) -> Result<TwoPhaseCheck> {
    if !trace.algorithm.spec.older_first() {
        return Err(Error::Unsupported(format!("{} does not serve old packets first", trace.algorithm.spec)));
    }
    let mut phase_of = Vec::with_capacity(trace.records.len() + 1);
    let last = replay(trace, |_, observer| phase_of.push(observer.protocol.phase()));
    phase_of.push(last.protocol.phase());
    let final_phase = phase_of[phase_of.len() - 1];

    let report = compute_latencies(trace).packets;
    let check = |shift: usize| {
        let mut checked = 0;
        for p in &report {
            let deadline = phase_of[p.injected as usize + shift] + 1;
            match p.heard {
                Some(h) if phase_of[h as usize] <= deadline => checked += 1,
                Some(h) => {
                    return CheckOutcome::Counterexample {
                        round: h,
                        details: format!(
                            "packet {} injected at round {} is heard in phase {}, after phase {}",
                            p.packet, p.injected, phase_of[h as usize], deadline
                        ),
                    }
                }
                None if final_phase > deadline => {
                    return CheckOutcome::Counterexample {
                        round: trace.horizon(),
                        details: format!(
                            "packet {} injected at round {} is still queued after phase {}",
                            p.packet, p.injected, deadline
                        ),
                    }
                }
                None => {}
            }
        }
        CheckOutcome::Pass { checked }
    };
    Ok(TwoPhaseCheck { by_injection_round: check(0), by_next_round: check(1) })
}

/// The delay caused by discovering one big station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelayWindow {
    /// Round in which the big station's flagged packet was heard.
    pub discovered: Round,
    pub station: StationId,
    /// 1-indexed list position before the move.
    pub position: usize,
    /// The station's queue at the start of the discovery round.
    pub queue: u64,
    /// Clear rounds of delay, `queue - n + position`.
    pub delay: u64,
    /// Round at whose start the credit is re-evaluated: the one after the
    /// `delay`-th clear round counted from the discovery round.
    pub end: Round,
    pub credit_before: u64,
    /// Credit at `end`, counting only packets already queued at discovery.
    pub credit_after: u64,
}

impl DelayWindow {
    pub fn holds(&self) -> bool {
        self.credit_after + self.delay == self.credit_before
    }
}

/// Credit of the list: station at 1-indexed position `i` with `q` packets
/// holds `max(0, q - (n - i))`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CreditLedger {
    /// Credit at the start of every round.
    pub credit: Vec<u64>,
    /// Delay windows that ended before the horizon without another discovery.
    pub windows: Vec<DelayWindow>,
    /// Discoveries whose window was cut short by another discovery or the horizon.
    pub interrupted: usize,
}

impl CreditLedger {
    pub fn failures(&self) -> impl Iterator<Item = &DelayWindow> {
        self.windows.iter().filter(|w| !w.holds())
    }
}

fn credit_of(list: &[StationId], queued: &[usize]) -> u64 {
    let n = list.len();
    list.iter().enumerate().map(|(pos, &s)| (queued[s] + pos + 1).saturating_sub(n) as u64).sum()
}

struct OpenWindow {
    window: DelayWindow,
    existing: Vec<usize>,
    clear_left: u64,
}

pub fn credit_ledger(trace: &Trace) -> Result<CreditLedger> {
    if !matches!(trace.algorithm.spec, AlgorithmSpec::Mbtf(_)) {
        return Err(Error::Unsupported(format!(
            "credit is defined for move-big-to-front, not {}",
            trace.algorithm.spec
        )));
    }
    let n = trace.config.n;
    let mut ledger = CreditLedger { credit: Vec::with_capacity(trace.records.len()), ..Default::default() };
    let mut observer = trace.algorithm.observe_queues(n);
    let mut open: Option<OpenWindow> = None;
    let list = |o: &Observer| match &o.protocol {
        Protocol::Mbtf(m) => m.list.clone(),
        _ => unreachable!(),
    };

    for record in &trace.records {
        let before = list(&observer);
        let credit = credit_of(&before, &observer.queued);
        ledger.credit.push(credit);

        let discovery = match record.feedback {
            crate::channel::Feedback::Heard(msg) if msg.big_flag => Some(msg.sender),
            _ => None,
        };
        if let Some(station) = discovery {
            if open.take().is_some() {
                ledger.interrupted += 1;
            }
            let position = before.iter().position(|&s| s == station).expect("permutation") + 1;
            let queue = observer.queued[station] as u64;
            let delay = (queue + position as u64).saturating_sub(n as u64);
            open = Some(OpenWindow {
                window: DelayWindow {
                    discovered: record.round,
                    station,
                    position,
                    queue,
                    delay,
                    end: 0,
                    credit_before: credit,
                    credit_after: 0,
                },
                existing: observer.queued.clone(),
                clear_left: delay,
            });
        }

        let ended = observer.observe(&record.feedback);
        for &(station, _) in &record.injections {
            observer.enqueue(station);
        }
        observer.graduate(ended);

        if let Some(mut w) = open.take() {
            if let Some((sender, _)) = record.feedback.heard_packet() {
                w.existing[sender] = w.existing[sender].saturating_sub(1);
            }
            if !record.jammed {
                w.clear_left -= 1;
            }
            if w.clear_left == 0 {
                w.window.end = record.round + 1;
                w.window.credit_after = credit_of(&list(&observer), &w.existing);
                ledger.windows.push(w.window);
            } else {
                open = Some(w);
            }
        }
    }
    if open.is_some() {
        ledger.interrupted += 1;
    }
    Ok(ledger)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass { checked: u64 },
    Counterexample { round: Round, details: String },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass { .. })
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Pass { checked } => write!(f, "pass ({checked} windows)"),
            CheckOutcome::Counterexample { round, details } => write!(f, "fails at round {round}: {details}"),
        }
    }
}

/// Progress guarantees checked round by round on a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProgressCheck {
    /// OF-JRRW(J): with `x` old packets queued, at least `x` packets are
    /// heard within `⌈(x + n(J+1) + b) / (1 - lambda)⌉` rounds.
    VoidRunOldPackets,
    /// OFC-RRW: with `x` old packets queued, at least `x` packets are heard
    /// within `⌈(x + n + b) / (1 - lambda)⌉` rounds.
    ControlOldPackets,
    /// SRR and OF-SRR: with `x >= 1` packets queued, for every
    /// `1 <= y <= x` the first `y` packets are heard within
    /// `min(y lg n, 2n + y)` rounds.
    SearchProgress,
}

impl ProgressCheck {
    pub const IDS: [&'static str; 3] = ["void-run-old-packets", "control-old-packets", "search-progress"];

    pub fn id(&self) -> &'static str {
        match self {
            ProgressCheck::VoidRunOldPackets => Self::IDS[0],
            ProgressCheck::ControlOldPackets => Self::IDS[1],
            ProgressCheck::SearchProgress => Self::IDS[2],
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        match id {
            "void-run-old-packets" => Ok(ProgressCheck::VoidRunOldPackets),
            "control-old-packets" => Ok(ProgressCheck::ControlOldPackets),
            "search-progress" => Ok(ProgressCheck::SearchProgress),
            other => Err(Error::InvalidInput(format!("unknown check {other:?}"))),
        }
    }

    /// The check that applies to an algorithm, if any.
    pub fn for_algorithm(spec: &AlgorithmSpec) -> Option<Self> {
        match spec {
            AlgorithmSpec::OfJrrw { .. } => Some(ProgressCheck::VoidRunOldPackets),
            AlgorithmSpec::OfcRrw => Some(ProgressCheck::ControlOldPackets),
            AlgorithmSpec::Srr | AlgorithmSpec::OfSrr => Some(ProgressCheck::SearchProgress),
            _ => None,
        }
    }
}

/// Runs a progress check over every round whose window fits in the trace and
/// returns the first violation.
pub fn lemma_check(trace: &Trace, check: ProgressCheck) -> Result<CheckOutcome> {
    if ProgressCheck::for_algorithm(&trace.algorithm.spec) != Some(check) {
        return Err(Error::Unsupported(format!("{} does not apply to {}", check.id(), trace.algorithm.spec)));
    }
    let n = trace.config.n as u64;
    if check == ProgressCheck::SearchProgress && n < 2 {
        return Err(Error::Unsupported("search progress needs lg n >= 1".into()));
    }
    let h = trace.horizon();
    // heard_before[t] = packets heard in rounds < t.
    let mut heard_before = Vec::with_capacity(trace.records.len() + 1);
    let mut heard_rounds = Vec::new();
    heard_before.push(0u64);
    for record in &trace.records {
        let heard = record.feedback.heard_packet().is_some();
        if heard {
            heard_rounds.push(record.round);
        }
        heard_before.push(heard_before.last().unwrap() + u64::from(heard));
    }

    let kind = trace.adversary;
    let (p, q) = (*kind.lambda.numer() as u64, *kind.lambda.denom() as u64);
    let b = kind.b;
    let constant = match (check, trace.algorithm.spec.j()) {
        (ProgressCheck::VoidRunOldPackets, Some(j)) => n * (u64::from(j) + 1) + b,
        _ => n + b,
    };
    // ⌈(x + constant) / (1 - p/q)⌉ = ⌈(x + constant) q / (q - p)⌉
    let window = |x: u64| ((x + constant) * q).div_ceil(q - p);
    let lg_n = u64::from(lg(n as usize));

    let mut checked = 0u64;
    let mut failure = None;
    replay(trace, |record, observer| {
        if failure.is_some() {
            return;
        }
        let t = record.round;
        match check {
            ProgressCheck::VoidRunOldPackets | ProgressCheck::ControlOldPackets => {
                let x = observer.total_old() as u64;
                if x == 0 {
                    return;
                }
                let w = window(x);
                if t + w > h {
                    return;
                }
                checked += 1;
                let got = heard_before[(t + w) as usize] - heard_before[t as usize];
                if got < x {
                    failure = Some(CheckOutcome::Counterexample {
                        round: t,
                        details: format!("{x} old packets queued but only {got} heard in the next {w} rounds"),
                    });
                }
            }
            ProgressCheck::SearchProgress => {
                let x = observer.total_queued() as u64;
                let first = heard_before[t as usize] as usize;
                for y in 1..=x {
                    let w = (y * lg_n).min(2 * n + y);
                    if t + w > h {
                        break;
                    }
                    checked += 1;
                    let ok = heard_rounds.get(first + y as usize - 1).is_some_and(|&r| r < t + w);
                    if !ok {
                        failure = Some(CheckOutcome::Counterexample {
                            round: t,
                            details: format!("{x} packets queued but fewer than {y} heard in the next {w} rounds"),
                        });
                        return;
                    }
                }
            }
        }
    });
    Ok(failure.unwrap_or(CheckOutcome::Pass { checked }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{scripted, AdversaryScript, AdversaryType};
    use crate::algorithms::{AlgorithmInstance, MbtfVariant};
    use crate::channel::{run_simulation, ChannelConfig};
    use crate::rational::rational;

    fn run(spec: AlgorithmSpec, n: usize, kind: AdversaryType, script: &AdversaryScript, h: Round) -> Trace {
        let config = spec.default_channel(n).unwrap();
        let algorithm: AlgorithmInstance = spec.into();
        run_simulation(&config, &algorithm, scripted(script.clone(), kind), h).unwrap()
    }

    fn kind(rho: (i128, i128), lambda: (i128, i128), b: u64) -> AdversaryType {
        AdversaryType::new(rational(rho.0, rho.1), rational(lambda.0, lambda.1), b).unwrap()
    }

    #[test]
    fn empty_trace_has_empty_summary() {
        let config = ChannelConfig::new(2, false, false).unwrap();
        let trace = run_simulation(
            &config,
            &AlgorithmSpec::Rrw.into(),
            scripted(AdversaryScript::new(), kind((0, 1), (0, 1), 0)),
            0,
        )
        .unwrap();
        let report = compute_latencies(&trace);
        assert_eq!(report.summary, LatencySummary::default());
        assert_eq!(queue_occupancy(&trace).max_total(), 0);
    }

    #[test]
    fn rrw_single_station_burst_latencies() {
        let mut script = AdversaryScript::new();
        (0..3).for_each(|_| {
            script.inject(0, 0);
        });
        let trace = run(AlgorithmSpec::Rrw, 1, kind((0, 1), (0, 1), 3), &script, 10);
        let report = compute_latencies(&trace);
        let latencies: Vec<_> = report.heard().map(|p| p.latency().unwrap()).collect();
        assert_eq!(latencies, vec![1, 2, 3]);
        assert_eq!(report.summary.max, 3);
        assert_eq!(report.summary.mean, 2.0);
        assert!(report.to_csv().starts_with("packet_id,station,injected,heard,latency\n0,0,0,1,1\n"));
    }

    #[test]
    fn phases_of_an_idle_system() {
        let empty = AdversaryScript::new();
        let trace = run(AlgorithmSpec::OfcRrw, 3, kind((0, 1), (0, 1), 1), &empty, 10);
        let phases = phase_stats(&trace).unwrap();
        assert_eq!(phases.iter().filter(|p| p.complete).map(|p| p.length).collect::<Vec<_>>(), vec![3, 3, 3]);
        assert_eq!(
            phases.last().unwrap(),
            &PhaseStats {
                index: 3,
                start: 9,
                end: 9,
                length: 1,
                queued_at_start: 0,
                queued_at_end: 0,
                complete: false
            }
        );
        let trace = run(AlgorithmSpec::OfJrrw { j: 2 }, 2, kind((0, 1), (0, 1), 1), &empty, 12);
        assert!(phase_stats(&trace).unwrap().iter().all(|p| p.length == 6));
        let trace = run(AlgorithmSpec::Mbtf(MbtfVariant::Pausing), 2, kind((0, 1), (0, 1), 1), &empty, 4);
        assert!(matches!(phase_stats(&trace), Err(Error::Unsupported(_))));
    }

    #[test]
    fn credit_of_a_big_station_is_its_position() {
        // n = 3, list 0 1 2; a big station at position 2 holds n packets.
        assert_eq!(credit_of(&[0, 1, 2], &[0, 3, 0]), 2);
        assert_eq!(credit_of(&[0, 1, 2], &[2, 1, 0]), 0);
        assert_eq!(credit_of(&[0, 1, 2], &[0, 0, 3]), 3);
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert!(ProgressCheck::parse("nope").is_err());
        for id in ProgressCheck::IDS {
            assert_eq!(ProgressCheck::parse(id).unwrap().id(), id);
        }
    }
}
