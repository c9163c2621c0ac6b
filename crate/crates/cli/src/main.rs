use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lab_cli::{emit, run_with_workers, workers_from_env, CliError, CliResult, ExperimentConfig, KINDS};

#[derive(Parser)]
#[command(name = "lab", version, about = "Run one subgraph-count laboratory experiment")]
struct Args {
    /// Experiment kind; must match the kind in the config file.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(KINDS))]
    kind: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Base path; `.jsonl` and `.csv` are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: Args) -> CliResult<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.kind() != args.kind {
        return Err(CliError::config(format!("config is for {:?}, not {:?}", cfg.kind(), args.kind)));
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.trials.is_some() {
        cfg.trials = args.trials;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("lab-{}", cfg.kind())));
    let record = run_with_workers(&cfg, workers_from_env()?)?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    let (jsonl, csv) = emit(&record, &out)?;
    println!("{}", jsonl.display());
    println!("{}", csv.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
