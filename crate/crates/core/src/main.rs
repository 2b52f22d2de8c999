use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eon_itinerant::cli::{parse_config, restat, run_sweep, write_outputs, POPULATIONS_FILE, RUNS_FILE};
use eon_itinerant::Error;

#[derive(Parser)]
#[command(name = "eon-sim", version, about = "Sweep simulator for elastic optical networks with moving destinations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every population of a sweep and write runs.csv and populations.csv.
    Simulate {
        #[arg(long, env = "EON_SIM_CONFIG")]
        config: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long, env = "EON_SIM_JOBS")]
        jobs: Option<usize>,
        /// Output directory, overriding `out` in the config.
        #[arg(long, env = "EON_SIM_OUT")]
        out: Option<PathBuf>,
        /// Base seed, overriding `seed` in the config.
        #[arg(long, env = "EON_SIM_SEED")]
        seed: Option<u64>,
    },
    /// Recompute populations.csv from an existing runs.csv.
    Stats {
        #[arg(long = "in", env = "EON_SIM_IN")]
        dir: PathBuf,
    },
}

fn simulate(config: PathBuf, jobs: Option<usize>, out: Option<PathBuf>, seed: Option<u64>) -> Result<bool, Error> {
    let text = std::fs::read_to_string(&config).map_err(|source| Error::Io {
        path: config.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(out) = out {
        cfg.out = out;
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let pops = cfg.populations().len();
    eprintln!("{pops} populations x {} runs -> {}", cfg.runs, cfg.out.display());
    let outcome = run_sweep(&cfg, jobs)?;
    for f in &outcome.failed {
        let k = &f.key;
        eprintln!(
            "population {}/{}/{}/load {} failed at run {}: {}",
            k.reconfig, k.routing, k.policy, k.load, f.run, f.error
        );
    }
    write_outputs(&cfg.out, &outcome.runs, &outcome.populations)?;
    eprintln!(
        "wrote {} and {} ({} populations, {} failed)",
        cfg.out.join(RUNS_FILE).display(),
        cfg.out.join(POPULATIONS_FILE).display(),
        outcome.populations.len(),
        outcome.failed.len()
    );
    Ok(outcome.failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, jobs, out, seed } => simulate(config, jobs, out, seed),
        Command::Stats { dir } => restat(&dir).map(|pops| {
            eprintln!("wrote {} ({} populations)", dir.join(POPULATIONS_FILE).display(), pops.len());
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
