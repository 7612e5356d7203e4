//! Expands a small configuration grid, runs it in parallel and prints the
//! summary CSV and any soundness failures.

use advmac::experiment::{summary_csv, verify, ExperimentConfig};

const CONFIG: &str = "\
algorithm = rrw, of-rrw, c-rrw, ofc-rrw, jrrw, of-jrrw, mbtf
n = 2, 4, 8
rho = 1/4, 1/2
lambda = 0, 1/4
b = 1, 2
adversary = greedy-behind-token, random
seed = 0..3
horizon = auto
";

fn main() -> advmac::Result<()> {
    let config = ExperimentConfig::parse(CONFIG)?;
    let report = verify(&config)?;
    let csv = summary_csv(&report.results);
    for line in csv.lines().take(10) {
        println!("{line}");
    }
    println!("... {} rows", csv.lines().count() - 1);
    for failure in report.failures() {
        println!("unsound: {}", failure.point.describe());
    }
    println!("{}", report.summary_line());
    Ok(())
}
