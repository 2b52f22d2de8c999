use rayon::prelude::*;

use super::config::{Population, SweepConfig};
use super::output::{aggregate, PopulationKey, PopulationRow, RunRow};
use crate::error::{Error, Result};
use crate::simulator::{run, RunReport};

impl Population {
    pub fn key(&self) -> PopulationKey {
        PopulationKey {
            reconfig: self.reconfig.name().to_string(),
            routing: self.routing.name().to_string(),
            policy: self.policy.name().to_string(),
            load: self.load,
        }
    }
}

#[derive(Debug)]
pub struct FailedPopulation {
    pub key: PopulationKey,
    pub run: usize,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub runs: Vec<RunRow>,
    pub populations: Vec<PopulationRow>,
    pub failed: Vec<FailedPopulation>,
}

pub fn run_row(key: PopulationKey, run_index: usize, r: &RunReport) -> RunRow {
    RunRow {
        key,
        run: run_index,
        seed: r.seed,
        config_digest: r.config_digest.clone(),
        links: r.graph.link_count,
        alpha: r.graph.alpha,
        diameter_km: r.graph.diameter_km,
        lambda_h: r.lambda_h,
        metrics: r.metrics,
    }
}

/// Runs every population of the sweep. `jobs` bounds the worker threads
/// (`None` uses all cores). A failing run drops its whole population from
/// the outcome and is reported in `failed`; other populations still finish.
pub fn run_sweep(cfg: &SweepConfig, jobs: Option<usize>) -> Result<SweepOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Contract(format!("thread pool: {e}")))?;
    let pops = cfg.populations();
    let tasks: Vec<(usize, usize)> = (0..pops.len())
        .flat_map(|p| (0..cfg.runs).map(move |r| (p, r)))
        .collect();
    let results: Vec<Result<RunReport>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(p, r)| run(&cfg.run_config(&pops[p], r)))
            .collect()
    });

    let mut out = SweepOutcome::default();
    let mut results = results.into_iter();
    for pop in &pops {
        let key = pop.key();
        let mut rows = Vec::with_capacity(cfg.runs);
        let mut failure = None;
        for r in 0..cfg.runs {
            match results.next().expect("one result per task") {
                Ok(report) => rows.push(run_row(key.clone(), r, &report)),
                Err(error) if failure.is_none() => failure = Some((r, error)),
                Err(_) => {}
            }
        }
        match failure {
            Some((run, error)) => out.failed.push(FailedPopulation { key, run, error }),
            None => {
                out.populations.extend(aggregate(&rows)?);
                out.runs.extend(rows);
            }
        }
    }
    Ok(out)
}
