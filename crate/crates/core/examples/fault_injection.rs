//! Plants a fault in older-go-first jamming round-robin (the token leaves one
//! void round early) and shows the checks catching it while the correct
//! algorithm passes the same adversaries.

use advmac::experiment::{verify, ExperimentConfig};
use advmac::prelude::*;

fn main() -> advmac::Result<()> {
    let mut config = ExperimentConfig::parse(
        "algorithm = of-jrrw\nn = 2, 4\nrho = 1/4\nlambda = 1/4, 1/2\nb = 1, 2\n\
         adversary = targeted-burst:0, targeted-burst:1\n",
    )?;
    let correct = verify(&config)?;
    println!("correct: {}", correct.summary_line());

    config.fault = Some(Fault::ShortVoidRun);
    let faulty = verify(&config)?;
    println!("faulty:  {}", faulty.summary_line());
    if let Some(first) = faulty.failures().first() {
        println!("\n{}", first.point.describe());
        if let Some(outcome) = first.outcome() {
            for check in outcome.failed_checks() {
                println!("  {}: {}", check.name, check.outcome);
            }
        }
    }
    Ok(())
}
