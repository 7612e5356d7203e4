//! Drives the worst-case constructions and shows latency growing with the
//! number of stations for move-big-to-front and with the injection rate for
//! jamming round-robin.

use advmac::prelude::*;

fn worst(algorithm: AlgorithmSpec, n: usize, kind: AdversaryType, horizon: Round) -> advmac::Result<u64> {
    let config = algorithm.default_channel(n)?;
    let adversary = match algorithm {
        AlgorithmSpec::Mbtf(_) => mbtf_tightness_strategy(kind, algorithm, &config)?,
        _ => jrrw_tightness_strategy(kind, algorithm, &config)?,
    };
    let trace = run_simulation(&config, &algorithm.into(), adversary, horizon)?;
    Ok(compute_latencies(&trace).summary.worst())
}

fn main() -> advmac::Result<()> {
    let kind = AdversaryType::new(rational(3, 4), rational(0, 1), 2)?;
    let mbtf = AlgorithmSpec::Mbtf(MbtfVariant::Pausing);
    println!("mbtf, {kind}");
    let mut previous: Option<(usize, u64)> = None;
    for n in [4, 8, 16, 32] {
        let latency = worst(mbtf, n, kind, 200 * (n as u64) * (n as u64))?;
        let slope = previous.map(|(m, l)| (latency as f64 / l as f64).ln() / (n as f64 / m as f64).ln());
        match slope {
            Some(s) => println!("  n={n:<3} latency {latency:<6} log-log slope {s:.2}"),
            None => println!("  n={n:<3} latency {latency}"),
        }
        previous = Some((n, latency));
    }

    println!("jrrw(J=1), n=8, b=1");
    for rho in [4, 6, 7] {
        let kind = AdversaryType::new(rational(rho, 8), rational(0, 1), 1)?;
        let latency = worst(AlgorithmSpec::Jrrw { j: 1 }, 8, kind, 40_000)?;
        println!("  rho={rho}/8 latency {latency}");
    }
    Ok(())
}
