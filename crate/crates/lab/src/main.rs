use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ginls_lab::checks::operator_suite;
use ginls_lab::error::{EXIT_CHECK_FAILED, EXIT_OK};
use ginls_lab::experiments::{
    experiment_conservation_drift, experiment_continuous_dependence, experiment_deepwater_limit,
    experiment_mollified_convergence, worker_pool, write_json,
};
use ginls_lab::io::VERSION;
use ginls_lab::simulate::{output_dir, run_simulation};
use ginls_lab::{LabError, LabResult, RunConfig};

#[derive(Parser)]
#[command(
    name = "ginls",
    about = "Simulations and experiments for the gINLS equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted `key=value`, value parsed as TOML (e.g. `grid.n=512`).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Mollified,
    Continuity,
    Deepwater,
    Drift,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured initial data and write CSV and snapshots.
    Simulate(RunArgs),
    /// Run one of the convergence/stability experiments.
    Experiment {
        #[arg(value_enum)]
        which: Experiment,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Compare spectral operators against quadrature oracles.
    CheckOperators {
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    Version,
}

fn load(args: &RunArgs) -> LabResult<RunConfig> {
    let cfg = RunConfig::load(&args.config, &args.overrides)?;
    Ok(match args.seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    })
}

fn report<T: serde::Serialize>(
    args: &RunArgs,
    cfg: &RunConfig,
    name: &str,
    value: &T,
    passed: bool,
) -> LabResult<i32> {
    let dir = output_dir(cfg, args.out.as_deref());
    std::fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    write_json(&dir.join(format!("{name}.json")), value)?;
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialises")
    );
    println!("{name}: {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn run(cli: Cli) -> LabResult<i32> {
    match cli.command {
        Command::Version => {
            println!("ginls {VERSION}");
            Ok(EXIT_OK)
        }
        Command::CheckOperators { workers } => {
            let lines = worker_pool(workers)?.install(operator_suite)?;
            let mut ok = true;
            for l in &lines {
                ok &= l.passed;
                let tag = if l.passed { "ok  " } else { "FAIL" };
                println!("{tag} {:<40} {:>12.3e} <= {:.0e}", l.name, l.value, l.tol);
            }
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Simulate(args) => {
            let cfg = load(&args)?;
            let dir = output_dir(&cfg, args.out.as_deref());
            let s = run_simulation(&cfg, &dir)?;
            println!("wrote {} records to {}", s.records, s.csv.display());
            Ok(EXIT_OK)
        }
        Command::Experiment { which, args } => {
            let cfg = load(&args)?;
            let pool = worker_pool(args.workers)?;
            match which {
                Experiment::Mollified => {
                    let r = experiment_mollified_convergence(&cfg, &pool)?;
                    report(&args, &cfg, "mollified", &r, r.passed)
                }
                Experiment::Continuity => {
                    let r = experiment_continuous_dependence(&cfg, &pool)?;
                    report(&args, &cfg, "continuity", &r, r.passed)
                }
                Experiment::Deepwater => {
                    let r = experiment_deepwater_limit(&cfg, &pool)?;
                    report(&args, &cfg, "deepwater", &r, r.passed)
                }
                Experiment::Drift => {
                    let dir = output_dir(&cfg, args.out.as_deref());
                    std::fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
                    let r = experiment_conservation_drift(&cfg, &pool, Some(&dir))?;
                    report(&args, &cfg, "drift", &r, r.passed)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
