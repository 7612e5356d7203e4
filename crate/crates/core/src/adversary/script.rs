use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::channel::{Feedback, Trace};
use crate::error::BudgetKind;
use crate::{Error, Result, Round, StationId};

use super::{validate_counts, Adversary, AdversaryInstance, AdversaryType};

/// A fixed pattern: stations injected per round (one entry per packet) and
/// the set of jammed rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversaryScript {
    pub injections: BTreeMap<Round, Vec<StationId>>,
    pub jams: BTreeSet<Round>,
}

impl AdversaryScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn inject(&mut self, round: Round, station: StationId) -> &mut Self {
        self.injections.entry(round).or_default().push(station);
        self
    }

    pub fn jam(&mut self, round: Round) -> &mut Self {
        self.jams.insert(round);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.injections.values().all(Vec::is_empty) && self.jams.is_empty()
    }

    /// The pattern an execution actually saw.
    pub fn from_trace(trace: &Trace) -> Self {
        let mut script = Self::new();
        for record in &trace.records {
            for &(station, _) in &record.injections {
                script.inject(record.round, station);
            }
            if record.jammed {
                script.jam(record.round);
            }
        }
        script
    }

    /// Last round mentioned by the script, if any.
    pub fn last_round(&self) -> Option<Round> {
        let inject = self.injections.keys().next_back().copied();
        let jam = self.jams.iter().next_back().copied();
        inject.max(jam)
    }

    pub fn injection_counts(&self, horizon: Round) -> Vec<u64> {
        let mut counts = vec![0; horizon as usize];
        for (&round, stations) in self.injections.range(..horizon) {
            counts[round as usize] = stations.len() as u64;
        }
        counts
    }

    pub fn jam_counts(&self, horizon: Round) -> Vec<u64> {
        let mut counts = vec![0; horizon as usize];
        for &round in self.jams.range(..horizon) {
            counts[round as usize] = 1;
        }
        counts
    }

    /// Parses `inject <round> <station>` and `jam <round>` lines. Lines must
    /// be sorted by round; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut script = Self::new();
        let mut last = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::InvalidInput(format!("script line {}: {what}: {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str| s.parse::<u64>().map_err(|_| bad("expected a non-negative integer"));
            let round = match fields.as_slice() {
                ["inject", round, station] => {
                    let round = number(round)?;
                    script.inject(round, number(station)? as StationId);
                    round
                }
                ["jam", round] => {
                    let round = number(round)?;
                    script.jam(round);
                    round
                }
                _ => return Err(bad("expected `inject <round> <station>` or `jam <round>`")),
            };
            if round < last {
                return Err(bad("directives must be sorted by round"));
            }
            last = round;
        }
        Ok(script)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rounds: BTreeSet<Round> = self.injections.keys().chain(self.jams.iter()).copied().collect();
        for round in rounds {
            if self.jams.contains(&round) {
                let _ = writeln!(out, "jam {round}");
            }
            for station in self.injections.get(&round).into_iter().flatten() {
                let _ = writeln!(out, "inject {round} {station}");
            }
        }
        out
    }
}

/// Checks both windowed budgets over every window inside `0..horizon`.
///
/// Returns `Error::Budget` naming the first offending window (earliest end
/// round, injections checked before jams), or `Error::InvalidInput` if the
/// script mentions rounds at or past the horizon.
pub fn validate_script(script: &AdversaryScript, kind: &AdversaryType, horizon: Round) -> Result<()> {
    if let Some(last) = script.last_round() {
        if last >= horizon {
            return Err(Error::InvalidInput(format!("script mentions round {last} but the horizon is {horizon}")));
        }
    }
    let injections = validate_counts(&script.injection_counts(horizon), kind.rho, kind.b, BudgetKind::Injection);
    let jams = validate_counts(&script.jam_counts(horizon), kind.lambda, kind.b, BudgetKind::Jamming);
    match (injections, jams) {
        (Ok(()), Ok(())) => Ok(()),
        (Err(v), Ok(())) | (Ok(()), Err(v)) => Err(Error::Budget(v)),
        (Err(a), Err(b)) => Err(Error::Budget(if b.end < a.end { b } else { a })),
    }
}

struct Scripted {
    script: AdversaryScript,
}

impl Adversary for Scripted {
    fn jam(&mut self, round: Round) -> bool {
        self.script.jams.contains(&round)
    }

    fn inject(&mut self, round: Round, _feedback: &Feedback) -> Vec<StationId> {
        self.script.injections.get(&round).cloned().unwrap_or_default()
    }
}

/// Replays a fixed script. Budget violations surface when the simulation runs.
pub fn scripted(script: AdversaryScript, kind: AdversaryType) -> AdversaryInstance {
    AdversaryInstance::new(kind, "script", Box::new(Scripted { script }))
}
