//! focklab: runs one named experiment against a JSON config and writes a CSV
//! row table plus a JSON summary. Exit status: 0 all asserted contracts hold,
//! 1 a contract was violated, 2 configuration error, 3 numerical budget
//! refused.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use focklab::config::Config;
use focklab::experiments::{self, Experiment};
use focklab::HarnessError;

#[derive(Parser)]
#[command(
    name = "focklab",
    version,
    about = "Fock-space block-symbol experiment harness",
    after_help = "Experiments: hs-identity, block-decay, bridge, berezin, star, offdiag, \
counterexample, bounds-ledger, invariants.\nOutput directory precedence: --out, then \
config out_dir, then $FOCKLAB_OUT, then ./focklab-out."
)]
struct Cli {
    /// Experiment to run.
    experiment: String,
    /// JSON config path; omit to run the documented defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the CSV table and JSON summary.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's seed for sampled-point corpora.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread count (defaults to the machine's core count).
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let which = Experiment::parse(&cli.experiment).ok_or_else(|| {
        HarnessError::Config(format!(
            "unknown experiment {:?}; expected one of {}",
            cli.experiment,
            Experiment::ALL
                .iter()
                .map(|e| e.name())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("read {}: {e}", path.display())))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    }
    let out_dir: PathBuf = cli
        .out
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os("FOCKLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("./focklab-out"));
    let dump_dir = (which == Experiment::BlockDecay && cfg.block_decay.dump_matrices)
        .then(|| out_dir.join("matrices"));

    let report = experiments::run(which, &cfg, dump_dir.as_deref())?;
    let (csv, json) = report.write(&out_dir)?;
    for check in &report.checks {
        if !check.pass {
            eprintln!("FAIL {}: {}", check.name, check.detail);
        }
    }
    let verdict = if report.pass() { "PASS" } else { "FAIL" };
    println!(
        "{} {}: {} checks, {} rows, wrote {} and {}",
        verdict,
        report.experiment,
        report.checks.len(),
        report.table.rows.len(),
        csv.display(),
        json.display()
    );
    Ok(report.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
