//! Runs one execution of round-robin withholding and prints its first rounds
//! and the latency it observed next to the bound.

use advmac::prelude::*;

fn main() -> advmac::Result<()> {
    let algorithm = AlgorithmSpec::Rrw;
    let config = algorithm.default_channel(4)?;
    let kind = AdversaryType::new(rational(1, 2), rational(0, 1), 2)?;
    let adversary = greedy_strategy(kind, Targeting::BehindToken, algorithm, &config)?;
    let trace = run_simulation(&config, &algorithm.into(), adversary, 400)?;

    println!("round;transmitters;jammed;feedback;injections");
    for record in trace.records.iter().take(12) {
        println!("{}", record.canonical());
    }

    let latency = compute_latencies(&trace);
    let bound = latency_bound(&algorithm, config.n, &kind)?;
    let queues = queue_occupancy(&trace);
    println!();
    println!("heard {} packets, {} still queued", latency.summary.count, latency.summary.pending);
    println!("max latency {} (mean {:.2})", latency.summary.max, latency.summary.mean);
    println!("max queue {}", queues.max_total());
    println!("bound {} from {}", bound.value, bound.provenance);
    Ok(())
}
