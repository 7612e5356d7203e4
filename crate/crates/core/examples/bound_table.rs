//! Prints every latency bound for one adversary type, plus the queue bound of
//! move-big-to-front, as CSV.

use advmac::bounds::bound_table_csv;
use advmac::prelude::*;

fn main() -> advmac::Result<()> {
    let n = 8;
    let kind = AdversaryType::new(rational(1, 4), rational(1, 8), 2)?;
    let j = kind.jamming_burstiness() as u32;
    println!("n = {n}, {kind}, J = {j}");
    print!("{}", bound_table_csv(n, &kind, j)?);

    let queue = queue_bound_mbtf(n, &kind)?;
    println!("\nmbtf queue bound: {} ({})", queue.value, queue.provenance);

    // The bound explodes as the channel saturates.
    println!("\nrho,c-rrw,ofc-rrw");
    for rho in 1..8 {
        let kind = AdversaryType::new(rational(rho, 8), rational(0, 1), 1)?;
        let plain = latency_bound(&AlgorithmSpec::CRrw, n, &kind)?;
        let older = latency_bound(&AlgorithmSpec::OfcRrw, n, &kind)?;
        println!("{rho}/8,{},{}", plain.value, older.value);
    }
    Ok(())
}
