use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use exp_oco::harness::props::run_all;
use exp_oco::harness::{
    all_series_failed, final_round_stats, run_experiment, write_csv, write_metadata,
    ExperimentKind, ExperimentSpec,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "exp-oco",
    version,
    about = "Exponentiated-update online learning experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparse online logistic regression on an l1 ball.
    Logistic(RunArgs),
    /// Low-rank multitask logistic regression on a nuclear ball.
    Multitask(RunArgs),
    /// Accelerated zeroth-order composite minimisation.
    Blackbox(RunArgs),
    /// Seeded randomised checks of the core invariants.
    Props {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment spec; defaults to the built-in spec of the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (stdout if omitted); metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Config(anyhow::Error),
    Other(anyhow::Error),
}

fn load_spec(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentSpec> {
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::from_path(path)?,
        None => ExperimentSpec::default_for(kind),
    };
    if spec.kind != kind {
        anyhow::bail!(
            "config describes a {} experiment, not {}",
            spec.kind.name(),
            kind.name()
        );
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    spec.validate()?;
    Ok(spec)
}

fn run(kind: ExperimentKind, args: RunArgs) -> std::result::Result<ExitCode, Failure> {
    let spec = load_spec(kind, &args).map_err(Failure::Config)?;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")
            .map_err(Failure::Config)?;
    }
    let records = run_experiment(&spec)
        .context("experiment failed")
        .map_err(Failure::Other)?;

    let io = || -> Result<()> {
        match &args.out {
            Some(path) => {
                write_csv(
                    &records,
                    BufWriter::new(
                        File::create(path).with_context(|| format!("{}", path.display()))?,
                    ),
                )?;
                let mut meta = path.clone().into_os_string();
                meta.push(".meta.json");
                write_metadata(&spec, &records, BufWriter::new(File::create(&meta)?))?;
            }
            None => write_csv(&records, io::stdout().lock())?,
        }
        Ok(())
    };
    io().map_err(Failure::Other)?;

    for alg in &spec.algorithms {
        if let Some((mean, std)) = final_round_stats(&records, alg) {
            eprintln!("{alg:>14}: final {mean:.4} ± {std:.4}");
        }
    }
    if all_series_failed(&records, &spec) {
        eprintln!("every trial stopped on a numeric failure");
        return Ok(ExitCode::from(EXIT_NUMERIC));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = match cli.command {
        Command::Logistic(_) => ExperimentKind::Logistic,
        Command::Multitask(_) => ExperimentKind::Multitask,
        Command::Blackbox(_) => ExperimentKind::BlackboxComposite,
        Command::Props { seed, cases } => {
            let outcomes = run_all(seed, cases);
            for o in &outcomes {
                let status = if o.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} ({} cases){}",
                    o.name,
                    o.cases,
                    o.failure
                        .as_deref()
                        .map(|f| format!(": {f}"))
                        .unwrap_or_default()
                );
            }
            return if outcomes.iter().all(|o| o.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    let args = match cli.command {
        Command::Logistic(a) | Command::Multitask(a) | Command::Blackbox(a) => a,
        Command::Props { .. } => unreachable!(),
    };
    match run(kind, args) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
