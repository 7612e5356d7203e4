//! Online adversaries. All of them see only the public feedback and their own
//! emissions, from which they replay the shared protocol state and the queue
//! sizes exactly as an outside observer could.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{AlgorithmInstance, Observer, Protocol};
use crate::channel::{ChannelConfig, Feedback};
use crate::{Error, Result, Round, StationId};

use super::{Adversary, AdversaryInstance, AdversaryType, TokenBucket};

/// Where a greedy adversary puts its packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Targeting {
    SingleStation(StationId),
    /// Cycles through the stations, one packet at a time.
    RoundRobin,
    /// The station the token (or the search cursor) has just left.
    BehindToken,
}

impl Targeting {
    pub fn label(&self) -> String {
        match self {
            Targeting::SingleStation(i) => format!("greedy-single-{i}"),
            Targeting::RoundRobin => "greedy-round-robin".into(),
            Targeting::BehindToken => "greedy-behind-token".into(),
        }
    }
}

/// Jam bucket that is only used on channels that allow jamming.
fn jam_bucket(kind: &AdversaryType, config: &ChannelConfig) -> Option<TokenBucket> {
    config.jamming_enabled.then(|| kind.jamming_bucket())
}

/// Advances the jam bucket by one round, jamming iff `want` and permitted.
fn spend_jam(bucket: &mut Option<TokenBucket>, want: bool) -> bool {
    match bucket {
        Some(bucket) => {
            let jam = want && bucket.permits(1);
            let ok = bucket.try_advance(u64::from(jam));
            debug_assert!(ok);
            jam
        }
        None => false,
    }
}

struct Greedy {
    targeting: Targeting,
    shadow: Observer,
    inject: TokenBucket,
    jam: Option<TokenBucket>,
    next: StationId,
}

impl Adversary for Greedy {
    fn jam(&mut self, _round: Round) -> bool {
        spend_jam(&mut self.jam, true)
    }

    fn inject(&mut self, _round: Round, feedback: &Feedback) -> Vec<StationId> {
        let ended = self.shadow.observe(feedback);
        let count = self.inject.spend_up_to(u64::MAX);
        let n = self.shadow.n();
        let targets: Vec<StationId> = (0..count)
            .map(|_| match self.targeting {
                Targeting::SingleStation(i) => i,
                Targeting::RoundRobin => {
                    let s = self.next;
                    self.next = (self.next + 1) % n;
                    s
                }
                Targeting::BehindToken => self.shadow.protocol.behind_cursor(),
            })
            .collect();
        targets.iter().for_each(|&s| self.shadow.enqueue(s));
        self.shadow.graduate(ended);
        targets
    }
}

/// Injects as many packets as the bucket permits every round and jams every
/// round it may (on channels with jamming).
pub fn greedy_strategy(
    kind: AdversaryType,
    targeting: Targeting,
    algorithm: impl Into<AlgorithmInstance>,
    config: &ChannelConfig,
) -> Result<AdversaryInstance> {
    if let Targeting::SingleStation(i) = targeting {
        if i >= config.n {
            return Err(Error::Config(format!("target station {i} does not exist")));
        }
    }
    let strategy = Greedy {
        targeting,
        shadow: Into::<AlgorithmInstance>::into(algorithm).observe_queues(config.n),
        inject: kind.injection_bucket(),
        jam: jam_bucket(&kind, config),
        next: 0,
    };
    Ok(AdversaryInstance::new(kind, targeting.label(), Box::new(strategy)))
}

struct RandomBudgeted {
    n: usize,
    rng: ChaCha8Rng,
    inject: TokenBucket,
    jam: Option<TokenBucket>,
}

impl Adversary for RandomBudgeted {
    fn jam(&mut self, _round: Round) -> bool {
        let want = self.jam.is_some() && self.rng.gen_bool(0.5);
        spend_jam(&mut self.jam, want)
    }

    fn inject(&mut self, _round: Round, _feedback: &Feedback) -> Vec<StationId> {
        let available = self.inject.available();
        let count = if available == 0 { 0 } else { self.rng.gen_range(0..=available) };
        let ok = self.inject.try_advance(count);
        debug_assert!(ok);
        (0..count).map(|_| self.rng.gen_range(0..self.n)).collect()
    }
}

/// Seeded random emissions, always within the token buckets.
pub fn random_budgeted_strategy(kind: AdversaryType, seed: u64, config: &ChannelConfig) -> AdversaryInstance {
    let strategy = RandomBudgeted {
        n: config.n,
        rng: ChaCha8Rng::seed_from_u64(seed),
        inject: kind.injection_bucket(),
        jam: jam_bucket(&kind, config),
    };
    AdversaryInstance::new(kind, format!("random-{seed}"), Box::new(strategy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RingStage {
    /// Full-power injection behind the working holder, counting phases.
    Build { phases: u64 },
    /// Waiting for the token to leave station 1 while station 0 has packets.
    Armed,
    /// The distinguished packet sits at station 1 behind `ahead` packets;
    /// everything else goes to station 0.
    Drain { ahead: usize },
}

struct RingTightness {
    shadow: Observer,
    inject: TokenBucket,
    jam: Option<TokenBucket>,
    build_phases: u64,
    stage: RingStage,
}

impl RingTightness {
    fn target(&self) -> StationId {
        let holder = self.shadow.protocol.cursor();
        match self.stage {
            RingStage::Drain { .. } => 0,
            _ if self.shadow.transmits(holder) => self.shadow.protocol.behind_cursor(),
            _ => self.shadow.n() - 1,
        }
    }
}

impl Adversary for RingTightness {
    fn jam(&mut self, _round: Round) -> bool {
        let want = self.shadow.anyone_transmits();
        spend_jam(&mut self.jam, want)
    }

    fn inject(&mut self, _round: Round, feedback: &Feedback) -> Vec<StationId> {
        let before = self.shadow.protocol.cursor();
        let ended = self.shadow.observe(feedback);
        let after = self.shadow.protocol.cursor();

        if let RingStage::Drain { ahead } = self.stage {
            if feedback.heard_packet().map(|(s, _)| s) == Some(1) {
                self.stage = match ahead {
                    0 => RingStage::Build { phases: 0 },
                    k => RingStage::Drain { ahead: k - 1 },
                };
            }
        }
        if let RingStage::Build { phases } = self.stage {
            let phases = phases + u64::from(ended);
            self.stage = if phases >= self.build_phases { RingStage::Armed } else { RingStage::Build { phases } };
        }

        let mut count = self.inject.spend_up_to(u64::MAX);
        let mut targets = Vec::with_capacity(count as usize);
        if self.stage == RingStage::Armed && before == 1 && after != 1 && self.shadow.queued[0] > 0 && count > 0 {
            self.stage = RingStage::Drain { ahead: self.shadow.queued[1] };
            targets.push(1);
            count -= 1;
        }
        let target = self.target();
        targets.extend((0..count).map(|_| target));
        targets.iter().for_each(|&s| self.shadow.enqueue(s));
        self.shadow.graduate(ended);
        targets
    }
}

/// The round-robin lower-bound construction.
///
/// Queues are grown behind the working holder (and at the last station while
/// the holder is idle) for `n - 2` phases. Then, right after the token has
/// left station 1 while station 0 still holds packets, a single packet is
/// injected into station 1 and every later packet goes to station 0, which
/// the token must unload before it can return to station 1. Once that packet
/// is heard the construction starts over.
pub fn jrrw_tightness_strategy(
    kind: AdversaryType,
    algorithm: impl Into<AlgorithmInstance>,
    config: &ChannelConfig,
) -> Result<AdversaryInstance> {
    let algorithm: AlgorithmInstance = algorithm.into();
    if !algorithm.spec.is_round_robin() {
        return Err(Error::Config(format!("jrrw-tightness needs a round-robin algorithm, not {}", algorithm.spec)));
    }
    if !kind.is_stable() {
        return Err(Error::Config(format!("jrrw-tightness needs rho + lambda < 1, got {kind}")));
    }
    if config.n < 2 {
        return Err(Error::Config("jrrw-tightness needs at least two stations".into()));
    }
    if let Some(j) = algorithm.spec.j() {
        let need = crate::rational::integer(kind.b) / ((crate::rational::integer(1) - kind.lambda) * 2);
        if crate::rational::integer(u64::from(j)) < need {
            return Err(Error::Config(format!(
                "jrrw-tightness needs J >= b/(2(1-lambda)) = {}, got J = {j}",
                crate::rational::format_rational(&need)
            )));
        }
    }
    let strategy = RingTightness {
        shadow: algorithm.observe_queues(config.n),
        inject: kind.injection_bucket(),
        jam: jam_bucket(&kind, config),
        build_phases: config.n.saturating_sub(2).max(1) as u64,
        stage: RingStage::Build { phases: 0 },
    };
    Ok(AdversaryInstance::new(kind, "jrrw-tightness", Box::new(strategy)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ListStage {
    /// Topping the last station of the list up to `n - 1` packets.
    FillLast,
    /// Making this station big.
    Critical(StationId),
}

struct ListTightness {
    shadow: Observer,
    inject: TokenBucket,
    jam: Option<TokenBucket>,
    last: StationId,
    stage: ListStage,
}

impl ListTightness {
    fn list(&self) -> &crate::algorithms::MoveBigToFront {
        match &self.shadow.protocol {
            Protocol::Mbtf(m) => m,
            _ => unreachable!("checked at construction"),
        }
    }

    /// Station at the list position before `station`, or `None` at the front.
    fn preceding(&self, station: StationId) -> Option<StationId> {
        let list = self.list();
        let at = list.position_of(station);
        (at > 0).then(|| list.list[at - 1])
    }

    fn restart_target(&self) -> ListStage {
        if self.shadow.queued[self.last] + 1 < self.shadow.n() {
            ListStage::FillLast
        } else {
            match self.preceding(self.last) {
                Some(s) => ListStage::Critical(s),
                None => ListStage::FillLast,
            }
        }
    }

    fn next_target(&mut self) -> StationId {
        let n = self.shadow.n();
        // Every station may already be big; give up after one sweep of the list.
        for _ in 0..=n + 1 {
            match self.stage {
                ListStage::FillLast if self.shadow.queued[self.last] + 1 < n => return self.last,
                ListStage::FillLast => match self.preceding(self.last) {
                    Some(s) => self.stage = ListStage::Critical(s),
                    None => return self.last,
                },
                ListStage::Critical(c) if self.shadow.queued[c] < n => return c,
                ListStage::Critical(c) => {
                    self.stage = match self.preceding(c) {
                        Some(s) => ListStage::Critical(s),
                        None => ListStage::FillLast,
                    }
                }
            }
        }
        match self.stage {
            ListStage::Critical(c) => c,
            ListStage::FillLast => self.last,
        }
    }
}

impl Adversary for ListTightness {
    fn jam(&mut self, _round: Round) -> bool {
        let want = self.shadow.anyone_transmits();
        spend_jam(&mut self.jam, want)
    }

    fn inject(&mut self, _round: Round, feedback: &Feedback) -> Vec<StationId> {
        let ended = self.shadow.observe(feedback);
        if self.list().holder() == self.last {
            self.stage = self.restart_target();
        }
        let count = self.inject.spend_up_to(u64::MAX);
        let mut targets = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let s = self.next_target();
            self.shadow.enqueue(s);
            targets.push(s);
        }
        self.shadow.graduate(ended);
        targets
    }
}

/// The move-big-to-front lower-bound construction.
///
/// First `n - 1` packets are built at the last station of the list. Then the
/// station just before it becomes critical and receives packets until it is
/// big, after which the station before that becomes critical, and so on.
/// Each discovered big station sends the token back to the front. When the
/// token reaches the last station, or the front of the list is reached, the
/// construction starts over. Jams hit every transmission the budget allows.
pub fn mbtf_tightness_strategy(
    kind: AdversaryType,
    algorithm: impl Into<AlgorithmInstance>,
    config: &ChannelConfig,
) -> Result<AdversaryInstance> {
    let algorithm: AlgorithmInstance = algorithm.into();
    let shadow = algorithm.observe_queues(config.n);
    if !matches!(shadow.protocol, Protocol::Mbtf(_)) {
        return Err(Error::Config(format!("mbtf-tightness needs move-big-to-front, not {}", algorithm.spec)));
    }
    let last = config.n - 1;
    let strategy = ListTightness {
        shadow,
        inject: kind.injection_bucket(),
        jam: jam_bucket(&kind, config),
        last,
        stage: ListStage::FillLast,
    };
    Ok(AdversaryInstance::new(kind, "mbtf-tightness", Box::new(strategy)))
}

struct TargetedBurst {
    target: StationId,
    burst: u64,
    shadow: Observer,
    inject: TokenBucket,
    jam: Option<TokenBucket>,
    remaining: u64,
}

impl Adversary for TargetedBurst {
    fn jam(&mut self, _round: Round) -> bool {
        if self.remaining == 0 && self.shadow.transmits(self.target) {
            if let Some(bucket) = &self.jam {
                let mut probe = bucket.clone();
                if (0..self.burst).all(|_| probe.try_advance(1)) {
                    self.remaining = self.burst;
                }
            }
        }
        let jam = spend_jam(&mut self.jam, self.remaining > 0);
        if jam {
            self.remaining -= 1;
        } else {
            self.remaining = 0;
        }
        jam
    }

    fn inject(&mut self, _round: Round, feedback: &Feedback) -> Vec<StationId> {
        let ended = self.shadow.observe(feedback);
        let count = self.inject.spend_up_to(u64::MAX);
        let targets = vec![self.target; count as usize];
        targets.iter().for_each(|&s| self.shadow.enqueue(s));
        self.shadow.graduate(ended);
        targets
    }
}

/// Injects greedily into `target` and saves its jamming budget until `target`
/// transmits, then jams `burst` consecutive rounds (the longest run the type
/// allows when `burst` is `None`).
pub fn targeted_burst_strategy(
    kind: AdversaryType,
    target: StationId,
    burst: Option<u64>,
    algorithm: impl Into<AlgorithmInstance>,
    config: &ChannelConfig,
) -> Result<AdversaryInstance> {
    if target >= config.n {
        return Err(Error::Config(format!("target station {target} does not exist")));
    }
    let burst = burst.unwrap_or_else(|| kind.jamming_burstiness());
    let strategy = TargetedBurst {
        target,
        burst,
        shadow: Into::<AlgorithmInstance>::into(algorithm).observe_queues(config.n),
        inject: kind.injection_bucket(),
        jam: jam_bucket(&kind, config),
        remaining: 0,
    };
    Ok(AdversaryInstance::new(kind, format!("targeted-burst-{target}"), Box::new(strategy)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{validate_script, AdversaryScript};
    use crate::algorithms::{AlgorithmSpec, MbtfVariant};
    use crate::channel::run_simulation;
    use crate::rational::rational;

    fn kind(rho: (i128, i128), lambda: (i128, i128), b: u64) -> AdversaryType {
        AdversaryType::new(rational(rho.0, rho.1), rational(lambda.0, lambda.1), b).unwrap()
    }

    #[test]
    fn greedy_with_zero_rates_spends_the_burst_once() {
        let spec = AlgorithmSpec::Rrw;
        let config = spec.default_channel(3).unwrap();
        let k = kind((0, 1), (0, 1), 4);
        let adversary = greedy_strategy(k, Targeting::SingleStation(0), spec, &config).unwrap();
        let trace = run_simulation(&config, &spec.into(), adversary, 20).unwrap();
        let script = AdversaryScript::from_trace(&trace);
        assert_eq!(script.injections.len(), 1);
        assert_eq!(script.injections[&0], vec![0; 4]);
    }

    #[test]
    fn shadow_tracks_the_real_queues() {
        let spec = AlgorithmSpec::OfJrrw { j: 2 };
        let config = spec.default_channel(4).unwrap();
        let k = kind((1, 2), (1, 4), 2);
        let algorithm: AlgorithmInstance = spec.into();
        let mut shadow = algorithm.observe_queues(4);
        let mut stations = algorithm.spawn(4);
        let mut adversary = random_budgeted_strategy(k, 3, &config);
        let mut next = 0;
        for round in 0..300 {
            let tx: Vec<_> = stations.iter().filter_map(|s| s.act()).collect();
            assert_eq!(shadow.anyone_transmits(), !tx.is_empty());
            let jammed = adversary.strategy.jam(round);
            let fb = crate::channel::resolve_round(&tx, jammed, &config).unwrap();
            let mut targets = adversary.strategy.inject(round, &fb);
            targets.sort();
            let ended = shadow.observe(&fb);
            targets.iter().for_each(|&s| shadow.enqueue(s));
            shadow.graduate(ended);
            for (name, station) in stations.iter_mut().enumerate() {
                let ids: Vec<u64> = targets
                    .iter()
                    .filter(|&&s| s == name)
                    .map(|_| {
                        next += 1;
                        next - 1
                    })
                    .collect();
                station.step(&fb, &ids);
                assert_eq!(station.view.queue.len(), shadow.queued[name]);
                assert_eq!(station.view.old, shadow.old[name]);
            }
        }
    }

    #[test]
    fn strategies_stay_within_budget() {
        let cases: Vec<(AlgorithmSpec, AdversaryType)> = vec![
            (AlgorithmSpec::Jrrw { j: 2 }, kind((1, 2), (1, 4), 1)),
            (AlgorithmSpec::OfJrrw { j: 4 }, kind((1, 4), (1, 2), 2)),
            (AlgorithmSpec::Mbtf(MbtfVariant::ControlBits), kind((3, 4), (1, 8), 2)),
            (AlgorithmSpec::Mbtf(MbtfVariant::Pausing), kind((3, 4), (0, 1), 3)),
            (AlgorithmSpec::OfSrr, kind((1, 2), (0, 1), 2)),
        ];
        for (spec, k) in cases {
            let config = spec.default_channel(5).unwrap();
            let mut adversaries = vec![
                greedy_strategy(k, Targeting::BehindToken, spec, &config).unwrap(),
                greedy_strategy(k, Targeting::RoundRobin, spec, &config).unwrap(),
                random_budgeted_strategy(k, 11, &config),
                targeted_burst_strategy(k, 2, None, spec, &config).unwrap(),
            ];
            if spec.is_round_robin() {
                adversaries.push(jrrw_tightness_strategy(k, spec, &config).unwrap());
            }
            if let AlgorithmSpec::Mbtf(_) = spec {
                adversaries.push(mbtf_tightness_strategy(k, spec, &config).unwrap());
            }
            for adversary in adversaries {
                let label = adversary.label.clone();
                let trace = run_simulation(&config, &spec.into(), adversary, 400).unwrap();
                let script = AdversaryScript::from_trace(&trace);
                assert!(validate_script(&script, &k, 400).is_ok(), "{spec} {label}");
            }
        }
    }

    #[test]
    fn random_strategy_is_deterministic_per_seed() {
        let spec = AlgorithmSpec::CRrw;
        let config = spec.default_channel(3).unwrap();
        let k = kind((1, 3), (1, 3), 2);
        let run = |seed| {
            let adversary = random_budgeted_strategy(k, seed, &config);
            run_simulation(&config, &spec.into(), adversary, 200).unwrap().canonical()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn tightness_preconditions() {
        let spec = AlgorithmSpec::Jrrw { j: 0 };
        let config = spec.default_channel(4).unwrap();
        assert!(jrrw_tightness_strategy(kind((1, 4), (1, 4), 2), spec, &config).is_err());
        assert!(jrrw_tightness_strategy(kind((3, 4), (1, 4), 0), spec, &config).is_err());
        let srr = AlgorithmSpec::Srr;
        assert!(jrrw_tightness_strategy(kind((1, 4), (0, 1), 1), srr, &srr.default_channel(4).unwrap()).is_err());
        assert!(mbtf_tightness_strategy(kind((1, 4), (0, 1), 1), srr, &srr.default_channel(4).unwrap()).is_err());
    }
}
