//! Runs the round-by-round progress checks, phase accounting and the
//! move-big-to-front credit ledger on single traces.
//!
//! The search check is expected to report a counterexample: collision and
//! query rounds make the first packets of a sweep slower than one per lg n
//! rounds.

use advmac::metrics::phase_recurrence_check;
use advmac::prelude::*;

fn run(algorithm: AlgorithmSpec, n: usize, kind: AdversaryType, seed: u64) -> advmac::Result<Trace> {
    let config = algorithm.default_channel(n)?;
    let adversary = random_budgeted_strategy(kind, seed, &config);
    run_simulation(&config, &algorithm.into(), adversary, 3000)
}

fn main() -> advmac::Result<()> {
    let kind = AdversaryType::new(rational(1, 3), rational(1, 6), 2)?;

    for algorithm in [AlgorithmSpec::OfJrrw { j: kind.jamming_burstiness() as u32 }, AlgorithmSpec::OfcRrw] {
        let trace = run(algorithm, 5, kind, 3)?;
        let check = ProgressCheck::for_algorithm(&algorithm).expect("older-go-first check");
        println!("{algorithm}: {} {}", check.id(), lemma_check(&trace, check)?);
        println!("{algorithm}: phase recurrence {}", phase_recurrence_check(&trace)?);
        let phases = phase_stats(&trace)?;
        let longest = phases.iter().filter(|p| p.complete).max_by_key(|p| p.length).expect("a phase");
        println!(
            "{algorithm}: {} phases, longest {} rounds starting at {} with {} queued",
            phases.len(),
            longest.length,
            longest.start,
            longest.queued_at_start
        );
    }

    let quiet = AdversaryType::new(rational(1, 3), rational(0, 1), 2)?;
    let trace = run(AlgorithmSpec::OfSrr, 8, quiet, 3)?;
    println!("of-srr: search-progress {}", lemma_check(&trace, ProgressCheck::SearchProgress)?);

    let mbtf = AlgorithmSpec::Mbtf(MbtfVariant::Pausing);
    let heavy = AdversaryType::new(rational(3, 4), rational(0, 1), 3)?;
    let trace = run(mbtf, 6, heavy, 3)?;
    let ledger = credit_ledger(&trace)?;
    println!(
        "mbtf: peak credit {}, {} delay windows ({} off by the shifted station's unit), {} interrupted",
        ledger.credit.iter().max().copied().unwrap_or(0),
        ledger.windows.len(),
        ledger.failures().count(),
        ledger.interrupted
    );
    Ok(())
}
