//! Invariants over randomly generated executions.

use std::collections::HashSet;

use advmac::adversary::validate_counts;
use advmac::error::BudgetKind;
use advmac::metrics::{queue_occupancy, replay, two_phase_check};
use advmac::prelude::*;
use advmac::Error;
use proptest::prelude::*;

fn spec_for(index: usize, j: u32, jamming: bool) -> AlgorithmSpec {
    AlgorithmSpec::parse(AlgorithmSpec::IDS[index], Some(j), jamming).unwrap()
}

/// A random execution: algorithm, channel size, stable adversary type and seed.
fn execution() -> impl Strategy<Value = (AlgorithmSpec, usize, AdversaryType, u64)> {
    (0..AlgorithmSpec::IDS.len(), 1usize..=6, 1i128..8, 0i128..4, 0u64..4, any::<u64>()).prop_map(
        |(index, n, rho, lambda, b, seed)| {
            let probe = spec_for(index, 0, false);
            let jam_free = !probe.default_channel(n).unwrap().jamming_enabled && probe.j().is_none();
            let lambda = if jam_free || rho + lambda >= 8 { 0 } else { lambda };
            let kind = AdversaryType::new(rational(rho, 8), rational(lambda, 8), b).unwrap();
            let spec = spec_for(index, kind.jamming_burstiness() as u32, lambda > 0);
            (spec, n, kind, seed)
        },
    )
}

fn simulate(spec: AlgorithmSpec, n: usize, kind: AdversaryType, seed: u64, horizon: Round) -> Trace {
    let config = spec.default_channel(n).unwrap();
    run_simulation(&config, &spec.into(), random_budgeted_strategy(kind, seed, &config), horizon).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn packets_are_conserved_and_heard_once((spec, n, kind, seed) in execution()) {
        let trace = simulate(spec, n, kind, seed, 300);
        let mut injected = std::collections::HashMap::new();
        let mut heard = HashSet::new();
        for record in &trace.records {
            if let Some((sender, id)) = record.feedback.heard_packet() {
                let (station, at) = injected[&id];
                prop_assert_eq!(station, sender);
                prop_assert!(at < record.round, "packet heard in its injection round");
                prop_assert!(heard.insert(id), "packet {} heard twice", id);
            }
            for &(station, id) in &record.injections {
                injected.insert(id, (station, record.round));
            }
        }
        prop_assert_eq!(heard.len() + trace.in_flight.len(), injected.len());
        for f in &trace.in_flight {
            prop_assert!(!heard.contains(&f.packet));
        }
    }

    #[test]
    fn token_algorithms_never_collide((spec, n, kind, seed) in execution()) {
        prop_assume!(!matches!(spec, AlgorithmSpec::Srr | AlgorithmSpec::OfSrr));
        let trace = simulate(spec, n, kind, seed, 300);
        for record in &trace.records {
            prop_assert!(record.transmitters.len() <= 1, "round {}", record.round);
        }
    }

    #[test]
    fn random_adversary_stays_within_its_type((spec, n, kind, seed) in execution()) {
        let trace = simulate(spec, n, kind, seed, 300);
        let script = AdversaryScript::from_trace(&trace);
        prop_assert!(validate_script(&script, &kind, 300).is_ok());
    }

    #[test]
    fn observer_replica_matches_the_stations((spec, n, kind, seed) in execution()) {
        let trace = simulate(spec, n, kind, seed, 200);
        let mut transmitted_as_predicted = true;
        let end = replay(&trace, |record, observer| {
            let predicted: Vec<StationId> = (0..n).filter(|&s| observer.transmits(s)).collect();
            let actual: Vec<StationId> = record.transmitters.iter().map(|m| m.sender).collect();
            transmitted_as_predicted &= predicted == actual;
        });
        prop_assert!(transmitted_as_predicted);
        let mut pending = vec![0usize; n];
        for f in &trace.in_flight {
            pending[f.station] += 1;
        }
        prop_assert_eq!(&end.queued, &pending);
        let occupancy = queue_occupancy(&trace);
        prop_assert_eq!(occupancy.totals.last().copied().unwrap_or(0), pending.iter().sum::<usize>() as u64);
    }

    #[test]
    fn older_packets_are_heard_within_two_phases((spec, n, kind, seed) in execution()) {
        prop_assume!(spec.older_first());
        let check = two_phase_check(&simulate(spec, n, kind, seed, 400)).unwrap();
        prop_assert!(check.by_injection_round.passed(), "{}", check.by_injection_round);
        prop_assert!(check.agree());
    }

    #[test]
    fn reruns_are_identical((spec, n, kind, seed) in execution()) {
        let a = simulate(spec, n, kind, seed, 150);
        let b = simulate(spec, n, kind, seed, 150);
        prop_assert_eq!(a.canonical(), b.canonical());
        prop_assert_eq!(compute_latencies(&a).to_csv(), compute_latencies(&b).to_csv());
    }

    #[test]
    fn zero_threshold_jamming_variants_match_the_originals(n in 1usize..=5, rho in 1i128..8, b in 1u64..4, seed: u64) {
        let kind = AdversaryType::new(rational(rho, 8), rational(0, 1), b).unwrap();
        for (plain, jamming) in [
            (AlgorithmSpec::Rrw, AlgorithmSpec::Jrrw { j: 0 }),
            (AlgorithmSpec::OfRrw, AlgorithmSpec::OfJrrw { j: 0 }),
        ] {
            let source = simulate(plain, n, kind, seed, 120);
            let script = AdversaryScript::from_trace(&source);
            let other = run_simulation(
                &jamming.default_channel(n).unwrap(),
                &jamming.into(),
                scripted(script, kind),
                120,
            )
            .unwrap();
            prop_assert_eq!(source.canonical(), other.canonical());
        }
    }

    #[test]
    fn bucket_agrees_with_window_check(
        counts in proptest::collection::vec(0u64..4, 1..40),
        p in 0i128..5,
        q in 1i128..5,
        burst in 0u64..4,
    ) {
        prop_assume!(p <= q);
        let rate = rational(p, q);
        let mut bucket = TokenBucket::new(rate, burst);
        let by_bucket = counts.iter().all(|&c| bucket.try_advance(c));
        let by_window = validate_counts(&counts, rate, burst, BudgetKind::Injection).is_ok();
        prop_assert_eq!(by_bucket, by_window);
    }

    #[test]
    fn scripts_round_trip_through_text(
        events in proptest::collection::vec((0u64..50, 0usize..8, any::<bool>()), 0..30),
    ) {
        let mut sorted = events;
        sorted.sort();
        let mut script = AdversaryScript::new();
        for (round, station, jam) in sorted {
            if jam {
                script.jam(round);
            } else {
                script.inject(round, station);
            }
        }
        prop_assert_eq!(AdversaryScript::parse(&script.to_text()).unwrap(), script);
    }
}

#[test]
fn greedy_strategies_respect_budgets_on_every_algorithm() {
    for id in AlgorithmSpec::IDS {
        for n in [1, 2, 5] {
            for (rho, lambda, b) in [(1, 0, 1), (3, 0, 2), (1, 1, 2), (2, 1, 3)] {
                let kind = AdversaryType::new(rational(rho, 4), rational(lambda, 4), b).unwrap();
                let spec = AlgorithmSpec::parse(id, Some(kind.jamming_burstiness() as u32), lambda > 0).unwrap();
                let config = spec.default_channel(n).unwrap();
                for targeting in [Targeting::SingleStation(n - 1), Targeting::RoundRobin, Targeting::BehindToken] {
                    let adversary = greedy_strategy(kind, targeting, spec, &config).unwrap();
                    let trace = run_simulation(&config, &spec.into(), adversary, 400)
                        .unwrap_or_else(|e| panic!("{spec} n={n} {kind}: {e}"));
                    assert!(validate_script(&AdversaryScript::from_trace(&trace), &kind, 400).is_ok());
                }
            }
        }
    }
}

#[test]
fn script_over_budget_is_rejected_by_the_simulator() {
    let kind = AdversaryType::new(rational(1, 2), rational(0, 1), 1).unwrap();
    let script = AdversaryScript::parse("inject 0 0\ninject 0 0\n").unwrap();
    let config = AlgorithmSpec::Rrw.default_channel(2).unwrap();
    let err = run_simulation(&config, &AlgorithmSpec::Rrw.into(), scripted(script, kind), 10).unwrap_err();
    assert!(matches!(err, Error::Budget(v) if v.start == 0 && v.end == 0 && v.count == 2));
}

#[test]
fn jamming_a_jam_free_channel_is_an_error() {
    let kind = AdversaryType::new(rational(1, 2), rational(1, 4), 1).unwrap();
    let script = AdversaryScript::parse("jam 0\n").unwrap();
    let config = AlgorithmSpec::Rrw.default_channel(2).unwrap();
    assert!(run_simulation(&config, &AlgorithmSpec::Rrw.into(), scripted(script, kind), 5).is_err());
}
