//! Pits every built-in strategy against older-go-first jamming round-robin and
//! reports the worst latency each one forces.

use advmac::experiment::{run_point, AdversarySpec, ExperimentPoint, PointStatus};
use advmac::prelude::*;

fn main() -> advmac::Result<()> {
    let kind = AdversaryType::new(rational(1, 4), rational(1, 4), 2)?;
    let algorithm = AlgorithmSpec::OfJrrw { j: kind.jamming_burstiness() as u32 };
    let adversaries = [
        "greedy-single:0",
        "greedy-round-robin",
        "greedy-behind-token",
        "targeted-burst:3",
        "random",
        "jrrw-tightness",
    ];
    println!("{algorithm} n=6 {kind}");
    println!("{:<22} {:>8} {:>6} {:>8}", "adversary", "latency", "queue", "ratio");
    for (id, name) in adversaries.iter().enumerate() {
        let point = ExperimentPoint {
            algorithm: algorithm.into(),
            n: 6,
            kind,
            horizon: Some(4000),
            adversary: AdversarySpec::parse(name)?,
            seed: 11,
        };
        match run_point(id, &point)?.status {
            PointStatus::Ran(outcome) => println!(
                "{:<22} {:>8} {:>6} {:>8.3}",
                name,
                outcome.observed(),
                outcome.max_queue,
                outcome.ratio.unwrap_or(f64::NAN)
            ),
            PointStatus::NotApplicable(why) => println!("{name:<22} n/a: {why}"),
        }
    }
    Ok(())
}
