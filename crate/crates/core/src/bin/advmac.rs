use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use advmac::experiment::{self, ExperimentConfig, PointStatus};
use advmac::metrics::compute_latencies;
use advmac::Error;

/// Simulate broadcast algorithms on adversarial multiple access channels.
///
/// Every value flag accepts a comma-separated list and overrides the same key
/// from `--config`; lists expand to their cross product.
#[derive(Debug, Parser)]
#[command(name = "advmac", version)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithm id: rrw, of-rrw, srr, of-srr, mbtf, mbtf-pause, mbtf-control, jrrw, of-jrrw, c-rrw, ofc-rrw.
    #[arg(long)]
    algorithm: Option<String>,
    /// Number of stations.
    #[arg(long)]
    n: Option<String>,
    /// Injection rate, an integer or `p/q`.
    #[arg(long)]
    rho: Option<String>,
    /// Jamming rate, an integer or `p/q`.
    #[arg(long)]
    lambda: Option<String>,
    /// Burstiness.
    #[arg(long)]
    b: Option<String>,
    /// Void-run threshold for the jamming round-robin family, or `auto`.
    #[arg(long = "J")]
    j: Option<String>,
    /// Number of rounds, or `auto` for four times the latency bound.
    #[arg(long)]
    horizon: Option<String>,
    /// Strategy name or `script:PATH`.
    #[arg(long)]
    adversary: Option<String>,
    /// Seed, list of seeds or `a..b` range for the random adversary.
    #[arg(long)]
    seed: Option<String>,
    /// `short-void-run` to run a deliberately broken jamming round-robin.
    #[arg(long)]
    fault: Option<String>,
    /// Directory for trace, metrics and report files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check every point against its bounds; without a configuration the
    /// built-in soundness grid is used.
    #[arg(long)]
    verify: bool,
    /// Random seeds per point of the built-in grid.
    #[arg(long, default_value_t = 50)]
    grid_seeds: u64,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_SOUNDNESS: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_for(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(match err {
        Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_CONFIG,
    })
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("algorithm", &self.algorithm),
            ("n", &self.n),
            ("rho", &self.rho),
            ("lambda", &self.lambda),
            ("b", &self.b),
            ("J", &self.j),
            ("horizon", &self.horizon),
            ("adversary", &self.adversary),
            ("seed", &self.seed),
            ("fault", &self.fault),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }

    fn experiment(&self) -> advmac::Result<ExperimentConfig> {
        let overrides = self.overrides();
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None if self.verify && overrides.is_empty() => ExperimentConfig::acceptance_grid(self.grid_seeds),
            None => ExperimentConfig::default(),
        };
        for (key, value) in overrides {
            config.set(key, value)?;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: &Cli) -> advmac::Result<bool> {
    let config = cli.experiment()?;
    let points = config.expand()?;
    let out = config.out.clone();
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
    }

    if points.len() == 1 && !cli.verify {
        let point = &points[0];
        let result = experiment::run_point(0, point)?;
        let report = experiment::report_text(std::slice::from_ref(&result));
        print!("{report}");
        if let Some(dir) = &out {
            if let PointStatus::Ran(_) = result.status {
                let trace = point.simulate()?;
                std::fs::write(dir.join("trace.txt"), trace.canonical())?;
                std::fs::write(dir.join("metrics.csv"), compute_latencies(&trace).to_csv())?;
            }
            std::fs::write(dir.join("report.txt"), &report)?;
            std::fs::write(dir.join("summary.csv"), experiment::summary_csv(std::slice::from_ref(&result)))?;
        }
        return Ok(result.outcome().is_none_or(|o| o.sound()));
    }

    let report = experiment::VerifyReport { results: experiment::run_grid(&points)? };
    if let Some(dir) = &out {
        std::fs::write(dir.join("summary.csv"), experiment::summary_csv(&report.results))?;
        std::fs::write(dir.join("report.txt"), experiment::report_text(&report.results))?;
    } else if !cli.verify {
        print!("{}", experiment::summary_csv(&report.results));
    }
    for failure in report.failures() {
        eprint!("{}", experiment::report_text(std::slice::from_ref(failure)));
    }
    println!("{}", report.summary_line());
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_SOUNDNESS),
        Err(err) => exit_for(&err),
    }
}
