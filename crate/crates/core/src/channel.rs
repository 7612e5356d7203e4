//! The slotted multiple access channel and the round driver.
//!
//! Every round runs the same four steps: (a) each station transmits or
//! pauses, (b) the channel resolves the transmissions and the jam flag into a
//! single feedback value shared by all stations, (c) the adversary's
//! injections are enqueued, (d) each station performs its state transition.
//! Injections of round `t` therefore cannot influence the transmission of
//! round `t`.

use std::fmt::{self, Write as _};

use crate::adversary::{AdversaryInstance, AdversaryType, WindowMonitor};
use crate::algorithms::{AlgorithmInstance, Station};
use crate::error::BudgetKind;
use crate::{Error, PacketId, Result, Round, StationId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelConfig {
    pub n: usize,
    pub jamming_enabled: bool,
    pub collision_detection: bool,
}

impl ChannelConfig {
    pub fn new(n: usize, jamming_enabled: bool, collision_detection: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a channel needs at least one station".into()));
        }
        Ok(Self { n, jamming_enabled, collision_detection })
    }
}

/// A message is a packet with control bits, or control bits alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutboundMessage {
    pub sender: StationId,
    pub payload: Option<PacketId>,
    /// Set by move-big-to-front when the sender holds at least `n` packets.
    pub big_flag: bool,
    pub control_only: bool,
}

impl OutboundMessage {
    pub fn packet(sender: StationId, id: PacketId) -> Self {
        Self { sender, payload: Some(id), big_flag: false, control_only: false }
    }

    pub fn big_packet(sender: StationId, id: PacketId) -> Self {
        Self { sender, payload: Some(id), big_flag: true, control_only: false }
    }

    pub fn control(sender: StationId) -> Self {
        Self { sender, payload: None, big_flag: false, control_only: true }
    }

    fn write_canonical(&self, out: &mut String) {
        let _ = write!(out, "{}:", self.sender);
        match self.payload {
            Some(id) => {
                let _ = write!(out, "{id}");
            }
            None => out.push('-'),
        }
        if self.big_flag {
            out.push('!');
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feedback {
    Heard(OutboundMessage),
    Silence,
    CollisionSignal,
}

impl Feedback {
    pub fn is_void(&self) -> bool {
        !matches!(self, Feedback::Heard(_))
    }

    /// The packet carried by a heard message, if any.
    pub fn heard_packet(&self) -> Option<(StationId, PacketId)> {
        match self {
            Feedback::Heard(msg) => msg.payload.map(|id| (msg.sender, id)),
            _ => None,
        }
    }
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feedback::Heard(msg) => match msg.payload {
                Some(id) => write!(f, "H:{id}"),
                None => f.write_str("H:-"),
            },
            Feedback::Silence => f.write_str("S"),
            Feedback::CollisionSignal => f.write_str("C"),
        }
    }
}

/// Resolves one round of transmissions into the feedback heard by everyone.
///
/// A message is heard iff exactly one station transmits and the round is
/// clear. Any other void round is a collision signal with collision
/// detection and silence without it.
pub fn resolve_round(transmitters: &[OutboundMessage], jammed: bool, config: &ChannelConfig) -> Result<Feedback> {
    if jammed && !config.jamming_enabled {
        return Err(Error::InvalidInput("jammed round on a channel without jamming".into()));
    }
    for (i, msg) in transmitters.iter().enumerate() {
        if msg.sender >= config.n {
            return Err(Error::InvalidInput(format!(
                "sender {} is not a station of a {}-station channel",
                msg.sender, config.n
            )));
        }
        if msg.control_only && msg.payload.is_some() {
            return Err(Error::InvalidInput("control-only message carries a packet".into()));
        }
        if transmitters[..i].iter().any(|other| other.sender == msg.sender) {
            return Err(Error::InvalidInput(format!("station {} transmits twice in one round", msg.sender)));
        }
    }
    Ok(match (transmitters, jammed) {
        ([only], false) => Feedback::Heard(*only),
        ([], false) => Feedback::Silence,
        _ if config.collision_detection => Feedback::CollisionSignal,
        _ => Feedback::Silence,
    })
}

/// Ground truth of one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: Round,
    /// Sorted by sender.
    pub transmitters: Vec<OutboundMessage>,
    pub jammed: bool,
    pub feedback: Feedback,
    /// `(station, packet)` in packet id order.
    pub injections: Vec<(StationId, PacketId)>,
}

impl RoundRecord {
    /// `round;transmitters;jammed;feedback;injections`
    pub fn write_canonical(&self, out: &mut String) {
        let _ = write!(out, "{};", self.round);
        for (i, msg) in self.transmitters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            msg.write_canonical(out);
        }
        let _ = write!(out, ";{};{};", u8::from(self.jammed), self.feedback);
        for (i, (station, packet)) in self.injections.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{station}:{packet}");
        }
    }

    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }
}

/// A packet still queued when the horizon was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InFlight {
    pub station: StationId,
    pub packet: PacketId,
    pub injected: Round,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub config: ChannelConfig,
    pub algorithm: AlgorithmInstance,
    pub adversary: AdversaryType,
    pub records: Vec<RoundRecord>,
    pub in_flight: Vec<InFlight>,
}

impl Trace {
    pub fn horizon(&self) -> Round {
        self.records.len() as Round
    }

    /// One canonical line per round, newline terminated.
    pub fn canonical(&self) -> String {
        let mut out = String::with_capacity(self.records.len() * 24);
        for record in &self.records {
            record.write_canonical(&mut out);
            out.push('\n');
        }
        out
    }
}

/// Runs `horizon` rounds of `algorithm` against `adversary`.
///
/// Fails if the algorithm does not fit the channel, if the adversary names a
/// station that does not exist or jams a channel without jamming, or if its
/// emissions exceed the leaky-bucket budget of its declared type.
pub fn run_simulation(
    config: &ChannelConfig,
    algorithm: &AlgorithmInstance,
    mut adversary: AdversaryInstance,
    horizon: Round,
) -> Result<Trace> {
    algorithm.spec.check_channel(config)?;
    let n = config.n;
    let kind = adversary.kind;
    let mut stations: Vec<Station> = algorithm.spawn(n);
    let mut inject_monitor = WindowMonitor::new(kind.rho, kind.b, BudgetKind::Injection);
    let mut jam_monitor = WindowMonitor::new(kind.lambda, kind.b, BudgetKind::Jamming);
    let mut records = Vec::with_capacity(horizon as usize);
    let mut injected_at: Vec<Round> = Vec::new();
    let mut next_packet: PacketId = 0;
    let mut per_station: Vec<Vec<PacketId>> = vec![Vec::new(); n];
    let mut transmitters = Vec::new();

    for round in 0..horizon {
        transmitters.clear();
        transmitters.extend(stations.iter().filter_map(Station::act));

        let jammed = adversary.strategy.jam(round);
        if jammed && !config.jamming_enabled {
            return Err(Error::InvalidInput(format!("adversary jams round {round} on a channel without jamming")));
        }
        jam_monitor.push(u64::from(jammed)).map_err(Error::Budget)?;
        let feedback = resolve_round(&transmitters, jammed, config)?;

        let mut targets = adversary.strategy.inject(round, &feedback);
        if let Some(&bad) = targets.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidInput(format!("adversary injects into station {bad} of a {n}-station channel")));
        }
        inject_monitor.push(targets.len() as u64).map_err(Error::Budget)?;
        // Stable sort keeps emission order among packets for the same station.
        targets.sort();
        let mut injections = Vec::with_capacity(targets.len());
        for station in targets {
            let id = next_packet;
            next_packet += 1;
            injected_at.push(round);
            per_station[station].push(id);
            injections.push((station, id));
        }

        for (name, station) in stations.iter_mut().enumerate() {
            station.step(&feedback, &per_station[name]);
            per_station[name].clear();
        }

        records.push(RoundRecord { round, transmitters: transmitters.clone(), jammed, feedback, injections });
    }

    let in_flight = stations
        .iter()
        .enumerate()
        .flat_map(|(name, station)| {
            let injected_at = &injected_at;
            station.view.queue.iter().map(move |&packet| InFlight {
                station: name,
                packet,
                injected: injected_at[packet as usize],
            })
        })
        .collect();

    Ok(Trace { config: *config, algorithm: *algorithm, adversary: kind, records, in_flight })
}
