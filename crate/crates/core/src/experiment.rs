//! Experiment configurations, grids and reports.
//!
//! A configuration is flat `key = value` text. Any value may be a
//! comma-separated list, and integer keys also accept `a..b` (end
//! exclusive); the grid is the cross product of all lists, enumerated in the
//! fixed key order `algorithm, n, rho, lambda, b, J, adversary, seed`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rayon::prelude::*;

use crate::adversary::{
    greedy_strategy, jrrw_tightness_strategy, mbtf_tightness_strategy, random_budgeted_strategy, scripted,
    targeted_burst_strategy, AdversaryInstance, AdversaryScript, AdversaryType, Targeting,
};
use crate::algorithms::{AlgorithmInstance, AlgorithmSpec, Fault};
use crate::bounds::{compare, latency_bound, queue_bound_mbtf, BoundResult, BoundValue};
use crate::channel::{run_simulation, ChannelConfig, Trace};
use crate::metrics::{
    compute_latencies, credit_ledger, lemma_check, max_total_queue, phase_recurrence_check, two_phase_check,
    CheckOutcome, LatencySummary, ProgressCheck,
};
use crate::rational::{ceil_u64, format_rational, parse_rational, Rational};
use crate::{Error, Result, Round, StationId};

/// Horizon used when the bound gives no finite scale.
pub const FALLBACK_HORIZON: Round = 2_000;
/// Automatic horizons are this multiple of the latency bound.
pub const HORIZON_FACTOR: u64 = 4;
/// Automatic horizons are never shorter than this.
pub const MIN_HORIZON: Round = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AdversarySpec {
    Greedy(Targeting),
    Random,
    JrrwTightness,
    MbtfTightness,
    TargetedBurst(StationId),
    Script(PathBuf),
}

impl AdversarySpec {
    /// `greedy-single[:i]`, `greedy-round-robin`, `greedy-behind-token`,
    /// `random`, `jrrw-tightness`, `mbtf-tightness`, `targeted-burst[:i]` or
    /// `script:PATH`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, arg) = match text.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (text, None),
        };
        let station = |arg: Option<&str>| -> Result<StationId> {
            arg.map_or(Ok(0), |a| a.parse().map_err(|_| Error::Config(format!("bad station in {text:?}"))))
        };
        Ok(match name {
            "greedy-single" => AdversarySpec::Greedy(Targeting::SingleStation(station(arg)?)),
            "greedy-round-robin" => AdversarySpec::Greedy(Targeting::RoundRobin),
            "greedy-behind-token" => AdversarySpec::Greedy(Targeting::BehindToken),
            "random" => AdversarySpec::Random,
            "jrrw-tightness" => AdversarySpec::JrrwTightness,
            "mbtf-tightness" => AdversarySpec::MbtfTightness,
            "targeted-burst" => AdversarySpec::TargetedBurst(station(arg)?),
            "script" => match arg {
                Some(path) if !path.is_empty() => AdversarySpec::Script(PathBuf::from(path)),
                _ => return Err(Error::Config("script adversary needs a path: script:PATH".into())),
            },
            _ => return Err(Error::Config(format!("unknown adversary {text:?}"))),
        })
    }

    pub fn label(&self) -> String {
        match self {
            AdversarySpec::Greedy(Targeting::SingleStation(i)) => format!("greedy-single:{i}"),
            AdversarySpec::Greedy(Targeting::RoundRobin) => "greedy-round-robin".into(),
            AdversarySpec::Greedy(Targeting::BehindToken) => "greedy-behind-token".into(),
            AdversarySpec::Random => "random".into(),
            AdversarySpec::JrrwTightness => "jrrw-tightness".into(),
            AdversarySpec::MbtfTightness => "mbtf-tightness".into(),
            AdversarySpec::TargetedBurst(i) => format!("targeted-burst:{i}"),
            AdversarySpec::Script(path) => format!("script:{}", path.display()),
        }
    }

    /// Whether the result depends on the seed.
    pub fn uses_seed(&self) -> bool {
        matches!(self, AdversarySpec::Random)
    }
}

/// One fully specified run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentPoint {
    pub algorithm: AlgorithmInstance,
    pub n: usize,
    pub kind: AdversaryType,
    /// `None` chooses [`HORIZON_FACTOR`] times the latency bound.
    pub horizon: Option<Round>,
    pub adversary: AdversarySpec,
    pub seed: u64,
}

impl ExperimentPoint {
    pub fn channel(&self) -> Result<ChannelConfig> {
        self.algorithm.spec.default_channel(self.n)
    }

    pub fn bound(&self) -> Result<BoundResult> {
        latency_bound(&self.algorithm.spec, self.n, &self.kind)
    }

    pub fn resolved_horizon(&self) -> Result<Round> {
        if let Some(h) = self.horizon {
            return Ok(h);
        }
        Ok(match self.bound()?.value {
            BoundValue::Finite(v) => (ceil_u64(&v) * HORIZON_FACTOR).max(MIN_HORIZON),
            _ => FALLBACK_HORIZON,
        })
    }

    /// Why this point makes no sense to run, if it does not.
    pub fn not_applicable(&self) -> Option<String> {
        let spec = &self.algorithm.spec;
        if !self.kind.is_stable() {
            return Some("rho + lambda >= 1".into());
        }
        match self.channel() {
            Ok(config) if !config.jamming_enabled && !self.kind.lambda.is_zero() => {
                return Some(format!("{spec} runs on a channel without jamming"));
            }
            Err(e) => return Some(e.to_string()),
            Ok(_) => {}
        }
        match self.adversary {
            AdversarySpec::JrrwTightness if !spec.is_round_robin() => {
                Some("jrrw-tightness targets the round-robin family".into())
            }
            AdversarySpec::MbtfTightness if !matches!(spec, AlgorithmSpec::Mbtf(_)) => {
                Some("mbtf-tightness targets move-big-to-front".into())
            }
            AdversarySpec::JrrwTightness | AdversarySpec::MbtfTightness if self.n < 2 => {
                Some("constructions need two stations".into())
            }
            _ => None,
        }
    }

    pub fn build_adversary(&self, config: &ChannelConfig) -> Result<AdversaryInstance> {
        let kind = self.kind;
        let algorithm = self.algorithm;
        match &self.adversary {
            AdversarySpec::Greedy(targeting) => greedy_strategy(kind, *targeting, algorithm, config),
            AdversarySpec::Random => Ok(random_budgeted_strategy(kind, self.seed, config)),
            AdversarySpec::JrrwTightness => jrrw_tightness_strategy(kind, algorithm, config),
            AdversarySpec::MbtfTightness => mbtf_tightness_strategy(kind, algorithm, config),
            AdversarySpec::TargetedBurst(i) => targeted_burst_strategy(kind, *i, None, algorithm, config),
            AdversarySpec::Script(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read script {}: {e}", path.display())))?;
                Ok(scripted(AdversaryScript::parse(&text)?, kind))
            }
        }
    }

    pub fn simulate(&self) -> Result<Trace> {
        let config = self.channel()?;
        let adversary = self.build_adversary(&config)?;
        run_simulation(&config, &self.algorithm, adversary, self.resolved_horizon()?)
    }

    pub fn j_label(&self) -> String {
        self.algorithm.spec.j().map(|j| j.to_string()).unwrap_or_default()
    }

    pub fn describe(&self) -> String {
        let mut s = format!(
            "{} n={} rho={} lambda={} b={} adversary={}",
            self.algorithm.spec,
            self.n,
            format_rational(&self.kind.rho),
            format_rational(&self.kind.lambda),
            self.kind.b,
            self.adversary.label()
        );
        if self.adversary.uses_seed() {
            let _ = write!(s, " seed={}", self.seed);
        }
        if let Some(fault) = self.algorithm.fault {
            let _ = write!(s, " fault={}", fault.id());
        }
        s
    }
}

/// A named check and its outcome. Diagnostic checks are reported but do not
/// affect the soundness verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub outcome: CheckOutcome,
    pub diagnostic: bool,
}

/// Everything measured on one run.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    pub horizon: Round,
    pub latency: LatencySummary,
    pub max_queue: u64,
    pub bound: BoundResult,
    pub ratio: Option<f64>,
    pub queue_bound: Option<BoundResult>,
    pub checks: Vec<CheckRecord>,
}

impl PointOutcome {
    /// Largest latency observed, counting packets still queued at the horizon.
    pub fn observed(&self) -> u64 {
        self.latency.worst()
    }

    pub fn latency_within_bound(&self) -> bool {
        self.bound.admits(self.observed())
    }

    pub fn queue_within_bound(&self) -> bool {
        self.queue_bound.as_ref().is_none_or(|q| q.admits(self.max_queue))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.diagnostic && !c.outcome.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    pub fn sound(&self) -> bool {
        self.latency_within_bound() && self.queue_within_bound() && self.failed_checks().next().is_none()
    }
}

/// Measures a finished trace: latency against the bound, the queue bound for
/// move-big-to-front, the progress check that applies, the phase recurrence
/// for phase algorithms, two-phase delivery for older-go-first algorithms
/// and the credit identity for move-big-to-front.
pub fn analyse(point: &ExperimentPoint, trace: &Trace) -> Result<PointOutcome> {
    let latency = compute_latencies(trace).summary;
    let max_queue = max_total_queue(trace);
    let bound = point.bound()?;
    let observed = latency.worst();
    let ratio = match &bound.value {
        BoundValue::Finite(v) if v.is_zero() => None,
        BoundValue::Finite(_) => compare(observed, &bound)?.ratio,
        _ => None,
    };
    let spec = point.algorithm.spec;
    let queue_bound = match spec {
        AlgorithmSpec::Mbtf(_) => Some(queue_bound_mbtf(point.n, &point.kind)?),
        _ => None,
    };
    let mut checks = Vec::new();
    if let Some(check) = ProgressCheck::for_algorithm(&spec) {
        if !(check == ProgressCheck::SearchProgress && point.n < 2) {
            checks.push(CheckRecord {
                name: check.id().into(),
                outcome: lemma_check(trace, check)?,
                diagnostic: false,
            });
        }
    }
    if spec.is_phase_algorithm() {
        checks.push(CheckRecord {
            name: "phase-recurrence".into(),
            outcome: phase_recurrence_check(trace)?,
            diagnostic: false,
        });
    }
    if spec.older_first() {
        let two = two_phase_check(trace)?;
        let agree = two.agree();
        checks.push(CheckRecord { name: "two-phase".into(), outcome: two.by_injection_round, diagnostic: false });
        if !agree {
            checks.push(CheckRecord {
                name: "two-phase-next-round".into(),
                outcome: two.by_next_round,
                diagnostic: true,
            });
        }
    }
    if let AlgorithmSpec::Mbtf(_) = spec {
        let ledger = credit_ledger(trace)?;
        let outcome = match ledger.failures().next() {
            None => CheckOutcome::Pass { checked: ledger.windows.len() as u64 },
            Some(w) => CheckOutcome::Counterexample {
                round: w.discovered,
                details: format!("credit {} -> {} over a delay of {} rounds", w.credit_before, w.credit_after, w.delay),
            },
        };
        // Shifted stations can gain credit they have not yet spent when the
        // window closes, so the identity is informative rather than binding.
        checks.push(CheckRecord { name: "credit-identity".into(), outcome, diagnostic: true });
    }
    Ok(PointOutcome { horizon: trace.horizon(), latency, max_queue, bound, ratio, queue_bound, checks })
}

#[derive(Debug, Clone)]
pub enum PointStatus {
    Ran(Box<PointOutcome>),
    NotApplicable(String),
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub id: usize,
    pub point: ExperimentPoint,
    pub status: PointStatus,
}

impl PointResult {
    pub fn outcome(&self) -> Option<&PointOutcome> {
        match &self.status {
            PointStatus::Ran(o) => Some(o),
            PointStatus::NotApplicable(_) => None,
        }
    }
}

/// Runs one point, or reports why it does not apply.
pub fn run_point(id: usize, point: &ExperimentPoint) -> Result<PointResult> {
    if let Some(reason) = point.not_applicable() {
        return Ok(PointResult { id, point: point.clone(), status: PointStatus::NotApplicable(reason) });
    }
    let trace = point.simulate()?;
    let outcome = analyse(point, &trace)?;
    Ok(PointResult { id, point: point.clone(), status: PointStatus::Ran(Box::new(outcome)) })
}

/// Runs all points, concurrently, and returns results in grid order.
pub fn run_grid(points: &[ExperimentPoint]) -> Result<Vec<PointResult>> {
    points.par_iter().enumerate().map(|(id, p)| run_point(id, p)).collect()
}

/// `config_id,algorithm,n,rho,lambda,b,J,max_latency,max_queue,bound,ratio`
pub fn summary_csv(results: &[PointResult]) -> String {
    let mut out = String::from("config_id,algorithm,n,rho,lambda,b,J,max_latency,max_queue,bound,ratio\n");
    for r in results {
        let p = &r.point;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},",
            r.id,
            p.algorithm.spec.id(),
            p.n,
            format_rational(&p.kind.rho),
            format_rational(&p.kind.lambda),
            p.kind.b,
            p.j_label()
        );
        match &r.status {
            PointStatus::Ran(o) => {
                let ratio = o.ratio.map(|x| format!("{x:.6}")).unwrap_or_default();
                let bound = match &o.bound.value {
                    BoundValue::Finite(v) => format_rational(v),
                    BoundValue::Unbounded => "unbounded".into(),
                    BoundValue::NotApplicable(_) => "not-applicable".into(),
                };
                let _ = writeln!(out, "{},{},{bound},{ratio}", o.observed(), o.max_queue);
            }
            PointStatus::NotApplicable(_) => out.push_str(",,not-applicable,\n"),
        }
    }
    out
}

/// Human-readable report, one block per point.
pub fn report_text(results: &[PointResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "[{}] {}", r.id, r.point.describe());
        match &r.status {
            PointStatus::NotApplicable(why) => {
                let _ = writeln!(out, "  not applicable: {why}");
            }
            PointStatus::Ran(o) => {
                let s = &o.latency;
                let _ = writeln!(
                    out,
                    "  horizon {}  heard {}  pending {}  max latency {}  mean {:.3}  max queue {}",
                    o.horizon,
                    s.count,
                    s.pending,
                    o.observed(),
                    s.mean,
                    o.max_queue
                );
                let _ = writeln!(out, "  latency bound {} [{}]", o.bound.value, o.bound.provenance);
                if let Some((formula, value)) = &o.bound.alternate {
                    let _ = writeln!(out, "  alternate form {value} [{formula}]");
                }
                if let Some(ratio) = o.ratio {
                    let _ = writeln!(out, "  observed/bound {ratio:.6}");
                }
                if let Some(q) = &o.queue_bound {
                    let verdict = if q.admits(o.max_queue) { "ok" } else { "EXCEEDED" };
                    let _ = writeln!(out, "  queue bound {} {verdict}", q.value);
                }
                for c in &o.checks {
                    let tag = if c.diagnostic { " (diagnostic)" } else { "" };
                    let _ = writeln!(out, "  {}{tag}: {}", c.name, c.outcome);
                }
                let _ = writeln!(out, "  verdict: {}", if o.sound() { "sound" } else { "SOUNDNESS FAILURE" });
            }
        }
    }
    out
}

/// Parsed configuration: every key maps to its list of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<String>,
    pub n: Vec<usize>,
    pub rho: Vec<Rational>,
    pub lambda: Vec<Rational>,
    pub b: Vec<u64>,
    /// `None` means `J = ⌊b/(1-lambda)⌋`, the jamming burstiness.
    pub j: Vec<Option<u32>>,
    pub horizon: Option<Round>,
    pub adversaries: Vec<AdversarySpec>,
    pub seeds: Vec<u64>,
    pub fault: Option<Fault>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: Vec::new(),
            n: Vec::new(),
            rho: Vec::new(),
            lambda: vec![Rational::zero()],
            b: Vec::new(),
            j: vec![None],
            horizon: None,
            adversaries: vec![AdversarySpec::Greedy(Targeting::BehindToken)],
            seeds: vec![0],
            fault: None,
            out: None,
        }
    }
}

const KEYS: [&str; 11] = ["algorithm", "n", "rho", "lambda", "b", "J", "horizon", "adversary", "seed", "fault", "out"];

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_ints(key: &str, value: &str) -> Result<Vec<u64>> {
    let bad = |v: &str| Error::Config(format!("{key}: expected a non-negative integer, got {v:?}"));
    let mut out = Vec::new();
    for item in split_list(value) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad(item))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(item))?;
            out.extend(a..b);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value: {raw:?}", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
            }
            if entries.insert(key, value.trim()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
        }
        let mut config = ExperimentConfig::default();
        for (key, value) in entries {
            config.set(key, value)?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key from its textual value; used by the parser and the CLI.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "algorithm" => self.algorithms = split_list(value).map(str::to_string).collect(),
            "n" => self.n = parse_ints(key, value)?.into_iter().map(|v| v as usize).collect(),
            "rho" => self.rho = split_list(value).map(parse_rational).collect::<Result<_>>()?,
            "lambda" => self.lambda = split_list(value).map(parse_rational).collect::<Result<_>>()?,
            "b" => self.b = parse_ints(key, value)?,
            "J" => {
                self.j = split_list(value)
                    .map(|v| match v {
                        "auto" => Ok(None),
                        v => v
                            .parse::<u32>()
                            .map(Some)
                            .map_err(|_| Error::Config(format!("J: expected an integer or auto, got {v:?}"))),
                    })
                    .collect::<Result<_>>()?
            }
            "horizon" => {
                self.horizon = match value.trim() {
                    "auto" => None,
                    v => Some(v.parse().map_err(|_| Error::Config(format!("horizon: bad value {v:?}")))?),
                }
            }
            "adversary" => self.adversaries = split_list(value).map(AdversarySpec::parse).collect::<Result<_>>()?,
            "seed" => self.seeds = parse_ints(key, value)?,
            "fault" => {
                self.fault = match value.trim() {
                    "none" | "" => None,
                    "short-void-run" => Some(Fault::ShortVoidRun),
                    v => return Err(Error::Config(format!("unknown fault {v:?}"))),
                }
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (key, empty) in [
            ("algorithm", self.algorithms.is_empty()),
            ("n", self.n.is_empty()),
            ("rho", self.rho.is_empty()),
            ("lambda", self.lambda.is_empty()),
            ("b", self.b.is_empty()),
            ("J", self.j.is_empty()),
            ("adversary", self.adversaries.is_empty()),
            ("seed", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("missing value for {key}")));
            }
        }
        if self.n.contains(&0) {
            return Err(Error::Config("n must be positive".into()));
        }
        for id in &self.algorithms {
            AlgorithmSpec::parse(id, Some(0), false)?;
        }
        for rho in &self.rho {
            for lambda in &self.lambda {
                AdversaryType::new(*rho, *lambda, 0)?;
            }
        }
        for adversary in &self.adversaries {
            if let AdversarySpec::Script(path) = adversary {
                if !path.is_file() {
                    return Err(Error::Config(format!("script {} does not exist", path.display())));
                }
            }
        }
        Ok(())
    }

    /// The cross product of all lists, in deterministic order. Seeds only
    /// multiply adversaries that use them.
    pub fn expand(&self) -> Result<Vec<ExperimentPoint>> {
        let mut points = Vec::new();
        for id in &self.algorithms {
            for &n in &self.n {
                for &rho in &self.rho {
                    for &lambda in &self.lambda {
                        for &b in &self.b {
                            let kind = AdversaryType::new(rho, lambda, b)?;
                            let mut js: Vec<Option<u32>> = Vec::new();
                            for j in &self.j {
                                let j = j.unwrap_or_else(|| kind.jamming_burstiness() as u32);
                                if !js.contains(&Some(j)) {
                                    js.push(Some(j));
                                }
                            }
                            for j in js {
                                let spec = AlgorithmSpec::parse(id, j, !lambda.is_zero())?;
                                if spec.j().is_none() && j != Some(kind.jamming_burstiness() as u32) && self.j.len() > 1
                                {
                                    // J only multiplies the jamming round-robin family.
                                    continue;
                                }
                                let algorithm = match self.fault {
                                    Some(fault) => AlgorithmInstance::with_fault(spec, fault),
                                    None => spec.into(),
                                };
                                for adversary in &self.adversaries {
                                    let seeds: &[u64] =
                                        if adversary.uses_seed() { &self.seeds } else { &self.seeds[..1] };
                                    for &seed in seeds {
                                        points.push(ExperimentPoint {
                                            algorithm,
                                            n,
                                            kind,
                                            horizon: self.horizon,
                                            adversary: adversary.clone(),
                                            seed,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(points)
    }

    /// The soundness grid: every algorithm over n ∈ {2,4,8,16}, b ∈ {1,2,5},
    /// rho ∈ {1/4,1/2,3/4}, lambda ∈ {0,1/4,1/2} (pairs with rho+lambda ≥ 1
    /// and jamming on jam-free algorithms come out not-applicable), against
    /// the three greedy targetings, both constructions and `random_seeds`
    /// random adversaries.
    pub fn acceptance_grid(random_seeds: u64) -> Self {
        Self {
            algorithms: AlgorithmSpec::IDS.iter().map(|s| s.to_string()).collect(),
            n: vec![2, 4, 8, 16],
            rho: vec![Rational::new(1, 4), Rational::new(1, 2), Rational::new(3, 4)],
            lambda: vec![Rational::zero(), Rational::new(1, 4), Rational::new(1, 2)],
            b: vec![1, 2, 5],
            j: vec![None],
            horizon: None,
            adversaries: vec![
                AdversarySpec::Greedy(Targeting::SingleStation(0)),
                AdversarySpec::Greedy(Targeting::RoundRobin),
                AdversarySpec::Greedy(Targeting::BehindToken),
                AdversarySpec::JrrwTightness,
                AdversarySpec::MbtfTightness,
                AdversarySpec::Random,
            ],
            seeds: (0..random_seeds).collect(),
            fault: None,
            out: None,
        }
    }
}

/// Outcome of a verification run over a grid.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub results: Vec<PointResult>,
}

impl VerifyReport {
    pub fn ran(&self) -> usize {
        self.results.iter().filter(|r| r.outcome().is_some()).count()
    }

    pub fn not_applicable(&self) -> usize {
        self.results.len() - self.ran()
    }

    pub fn failures(&self) -> Vec<&PointResult> {
        self.results.iter().filter(|r| r.outcome().is_some_and(|o| !o.sound())).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.results
            .iter()
            .filter_map(|r| r.outcome()?.ratio)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} points: {} ran, {} not applicable, {} unsound, max observed/bound {}",
            self.results.len(),
            self.ran(),
            self.not_applicable(),
            self.failures().len(),
            self.max_ratio().map(|r| format!("{r:.4}")).unwrap_or_else(|| "-".into())
        )
    }
}

pub fn verify(config: &ExperimentConfig) -> Result<VerifyReport> {
    Ok(VerifyReport { results: run_grid(&config.expand()?)? })
}
