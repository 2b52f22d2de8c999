//! CSV files written by a sweep: `runs.csv` (one row per run) and
//! `populations.csv` (one row per population).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulator::{population_mean, Metric, MetricSummary, MetricValues};

pub const RUNS_FILE: &str = "runs.csv";
pub const POPULATIONS_FILE: &str = "populations.csv";

const RUN_KEY_COLUMNS: [&str; 11] = [
    "reconfig",
    "routing",
    "policy",
    "load",
    "run",
    "seed",
    "config_digest",
    "links",
    "alpha",
    "diameter_km",
    "lambda_h",
];

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationKey {
    pub reconfig: String,
    pub routing: String,
    pub policy: String,
    pub load: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub key: PopulationKey,
    pub run: usize,
    pub seed: u64,
    pub config_digest: String,
    pub links: usize,
    pub alpha: f64,
    pub diameter_km: u64,
    pub lambda_h: f64,
    pub metrics: MetricValues,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationRow {
    pub key: PopulationKey,
    pub runs: usize,
    pub summary: Vec<MetricSummary>,
}

impl PopulationRow {
    pub fn get(&self, m: Metric) -> &MetricSummary {
        &self.summary[m.index()]
    }
}

pub fn runs_header() -> Vec<String> {
    let mut h: Vec<String> = RUN_KEY_COLUMNS.iter().map(|s| s.to_string()).collect();
    h.extend(Metric::ALL.iter().map(|m| m.name().to_string()));
    h
}

pub fn populations_header() -> Vec<String> {
    let mut h: Vec<String> = ["reconfig", "routing", "policy", "load", "runs"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for m in Metric::ALL {
        for suffix in ["mean", "se", "rse"] {
            h.push(format!("{}_{suffix}", m.name()));
        }
    }
    h
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Groups rows by population, keeping first-appearance order.
pub fn aggregate(rows: &[RunRow]) -> Result<Vec<PopulationRow>> {
    let mut groups: Vec<(PopulationKey, Vec<&MetricValues>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(k, _)| *k == r.key) {
            Some((_, v)) => v.push(&r.metrics),
            None => groups.push((r.key.clone(), vec![&r.metrics])),
        }
    }
    groups
        .into_iter()
        .map(|(key, values)| {
            let runs = values.len();
            Ok(PopulationRow {
                key,
                runs,
                summary: population_mean(values)?,
            })
        })
        .collect()
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(runs_header()).map_err(&err)?;
    for r in rows {
        let mut rec = vec![
            r.key.reconfig.clone(),
            r.key.routing.clone(),
            r.key.policy.clone(),
            r.key.load.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.config_digest.clone(),
            r.links.to_string(),
            r.alpha.to_string(),
            r.diameter_km.to_string(),
            r.lambda_h.to_string(),
        ];
        rec.extend(r.metrics.iter().map(|(_, v)| cell(v)));
        w.write_record(&rec).map_err(&err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_populations(path: &Path, rows: &[PopulationRow]) -> Result<()> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(populations_header()).map_err(&err)?;
    for p in rows {
        let mut rec = vec![
            p.key.reconfig.clone(),
            p.key.routing.clone(),
            p.key.policy.clone(),
            p.key.load.to_string(),
            p.runs.to_string(),
        ];
        for s in &p.summary {
            rec.push(cell(s.mean));
            rec.push(cell(s.se));
            rec.push(cell(s.rse));
        }
        w.write_record(&rec).map_err(&err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    let err = csv_err(path);
    let bad = |row: usize, msg: String| Error::CsvContent {
        path: path.to_path_buf(),
        msg: format!("row {row}: {msg}"),
    };
    let mut rdr = csv::Reader::from_path(path).map_err(&err)?;
    let header: Vec<String> = rdr.headers().map_err(&err)?.iter().map(str::to_string).collect();
    if header != runs_header() {
        return Err(Error::CsvContent {
            path: path.to_path_buf(),
            msg: "unexpected header".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(&err)?;
        let row = i + 2;
        let num = |j: usize| -> Result<f64> {
            rec[j]
                .parse::<f64>()
                .map_err(|e| bad(row, format!("column {}: {e}", header[j])))
        };
        let int = |j: usize| -> Result<u64> {
            rec[j]
                .parse::<u64>()
                .map_err(|e| bad(row, format!("column {}: {e}", header[j])))
        };
        let mut metrics = MetricValues::default();
        for (k, m) in Metric::ALL.into_iter().enumerate() {
            let j = RUN_KEY_COLUMNS.len() + k;
            metrics.set(m, if rec[j].is_empty() { None } else { Some(num(j)?) });
        }
        rows.push(RunRow {
            key: PopulationKey {
                reconfig: rec[0].to_string(),
                routing: rec[1].to_string(),
                policy: rec[2].to_string(),
                load: num(3)?,
            },
            run: int(4)? as usize,
            seed: int(5)?,
            config_digest: rec[6].to_string(),
            links: int(7)? as usize,
            alpha: num(8)?,
            diameter_km: int(9)?,
            lambda_h: num(10)?,
            metrics,
        });
    }
    Ok(rows)
}

/// Writes both files into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, runs: &[RunRow], populations: &[PopulationRow]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_runs(&dir.join(RUNS_FILE), runs)?;
    write_populations(&dir.join(POPULATIONS_FILE), populations)
}

/// Recomputes `populations.csv` from the `runs.csv` in `dir`.
pub fn restat(dir: &Path) -> Result<Vec<PopulationRow>> {
    let runs = read_runs(&dir.join(RUNS_FILE))?;
    let pops = aggregate(&runs)?;
    write_populations(&dir.join(POPULATIONS_FILE), &pops)?;
    Ok(pops)
}
