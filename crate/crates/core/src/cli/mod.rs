//! Sweep driver behind the `eon-sim` binary.

mod config;
mod output;
mod sweep;

pub use config::{parse_config, Population, SweepConfig, KEYS};
pub use output::{
    aggregate, populations_header, read_runs, restat, runs_header, write_outputs, write_populations, write_runs,
    PopulationKey, PopulationRow, RunRow, POPULATIONS_FILE, RUNS_FILE,
};
pub use sweep::{run_row, run_sweep, FailedPopulation, SweepOutcome};
