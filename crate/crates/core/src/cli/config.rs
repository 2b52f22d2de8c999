//! Sweep configuration in a plain `key = value` format.
//!
//! ```text
//! # comments start with '#'
//! reconfig = proposed, complete
//! routing  = optimal, yen
//! policy   = fittest
//! loads    = 0.4, 1.0
//! runs     = 30
//! ```
//!
//! Omitted keys take the full-scale defaults (see [`SweepConfig::default`]).

use std::collections::HashSet;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::reconfig::ReconfigAlg;
use crate::routing::{RoutingAlg, DEFAULT_K};
use crate::simulator::{FailurePolicy, RunConfig};
use crate::spectrum::Policy;
use crate::traffic::default_loads;

pub const KEYS: &[&str] = &[
    "reconfig",
    "routing",
    "policy",
    "loads",
    "runs",
    "seed",
    "out",
    "nodes",
    "width_km",
    "height_km",
    "slices",
    "horizon",
    "warmup",
    "beta",
    "gamma",
    "hop_shift_mean",
    "k",
    "on_reconfig_failure",
    "label_cap",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub reconfigs: Vec<ReconfigAlg>,
    pub routings: Vec<RoutingAlg>,
    pub policies: Vec<Policy>,
    pub loads: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Every non-swept run parameter. Its routing, reconfig, policy, load and
    /// seed fields are overwritten per run.
    pub base: RunConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            reconfigs: vec![ReconfigAlg::Proposed, ReconfigAlg::Complete],
            routings: vec![RoutingAlg::Optimal, RoutingAlg::YenKsp(DEFAULT_K), RoutingAlg::LdAsp],
            policies: Policy::ALL.to_vec(),
            loads: default_loads(),
            runs: 100,
            seed: 1,
            out: PathBuf::from("results"),
            base: RunConfig::default(),
        }
    }
}

/// One point of the sweep cross-product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Population {
    pub reconfig: ReconfigAlg,
    pub routing: RoutingAlg,
    pub policy: Policy,
    pub load: f64,
}

impl SweepConfig {
    pub fn populations(&self) -> Vec<Population> {
        let mut out = Vec::new();
        for &reconfig in &self.reconfigs {
            for &routing in &self.routings {
                for &policy in &self.policies {
                    for &load in &self.loads {
                        out.push(Population {
                            reconfig,
                            routing,
                            policy,
                            load,
                        });
                    }
                }
            }
        }
        out
    }

    /// Seed of run `run` in every population. Runs with the same index share
    /// a topology and traffic streams across populations.
    pub fn run_seed(&self, run: usize) -> u64 {
        splitmix64(self.seed ^ splitmix64(run as u64 + 1))
    }

    pub fn run_config(&self, pop: &Population, run: usize) -> RunConfig {
        let mut c = self.base.clone();
        c.reconfig = pop.reconfig;
        c.routing = pop.routing;
        c.policy = pop.policy;
        c.traffic.mu = pop.load;
        c.seed = self.run_seed(run);
        c
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn list<T>(line: usize, key: &str, value: &str, allowed: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let items: Vec<&str> = value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::Config {
            line,
            msg: format!("`{key}` must list at least one value ({allowed})"),
        });
    }
    items
        .into_iter()
        .map(|item| {
            f(item).ok_or_else(|| Error::Config {
                line,
                msg: format!("invalid {key} `{item}`; allowed: {allowed}"),
            })
        })
        .collect()
}

fn number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Config {
        line,
        msg: format!("invalid {key} `{value}`: {e}"),
    })
}

fn positive(line: usize, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config {
            line,
            msg: format!("{key} must be positive, got {v}"),
        })
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let mut seen = HashSet::new();
    let mut routing_words: Option<(usize, Vec<String>)> = None;
    let mut k = DEFAULT_K;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config {
                line,
                msg: format!("unknown key `{key}`; known keys: {}", KEYS.join(", ")),
            });
        }
        if !seen.insert(key.clone()) {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        let b = &mut cfg.base;
        match key.as_str() {
            "reconfig" => cfg.reconfigs = list(line, "reconfig", value, "proposed, complete", ReconfigAlg::parse)?,
            "routing" => {
                let words = list(line, "routing", value, "optimal, yen, ldasp", |s| {
                    RoutingAlg::parse(s, DEFAULT_K).map(|_| s.to_string())
                })?;
                routing_words = Some((line, words));
            }
            "policy" => cfg.policies = list(line, "policy", value, "first, fittest, random", Policy::parse)?,
            "loads" => {
                let loads = list(line, "loads", value, "positive numbers", |s| s.parse::<f64>().ok())?;
                for &l in &loads {
                    positive(line, "load", l)?;
                }
                cfg.loads = loads;
            }
            "runs" => {
                cfg.runs = number(line, "runs", value)?;
                if cfg.runs < 2 {
                    return Err(Error::Config {
                        line,
                        msg: "runs must be at least 2".into(),
                    });
                }
            }
            "seed" => cfg.seed = number(line, "seed", value)?,
            "out" => cfg.out = PathBuf::from(value),
            "nodes" => {
                b.nodes = number(line, "nodes", value)?;
                if b.nodes < 2 {
                    return Err(Error::Config {
                        line,
                        msg: "nodes must be at least 2".into(),
                    });
                }
            }
            "width_km" => b.width_km = positive(line, "width_km", number(line, "width_km", value)?)?,
            "height_km" => b.height_km = positive(line, "height_km", number(line, "height_km", value)?)?,
            "slices" => {
                b.n_slices = number(line, "slices", value)?;
                if b.n_slices == 0 {
                    return Err(Error::Config {
                        line,
                        msg: "slices must be positive".into(),
                    });
                }
            }
            "horizon" => b.horizon_h = positive(line, "horizon", number(line, "horizon", value)?)?,
            "warmup" => {
                b.warmup_h = number(line, "warmup", value)?;
                if b.warmup_h.is_nan() || b.warmup_h < 0.0 {
                    return Err(Error::Config {
                        line,
                        msg: "warmup must be nonnegative".into(),
                    });
                }
            }
            "beta" => b.traffic.beta_hours = positive(line, "beta", number(line, "beta", value)?)?,
            "gamma" => {
                b.traffic.gamma = number(line, "gamma", value)?;
                if b.traffic.gamma.is_nan() || b.traffic.gamma < 1.0 {
                    return Err(Error::Config {
                        line,
                        msg: "gamma must be at least 1".into(),
                    });
                }
            }
            "hop_shift_mean" => {
                b.traffic.hop_shift_mean = number(line, "hop_shift_mean", value)?;
                if b.traffic.hop_shift_mean.is_nan() || b.traffic.hop_shift_mean < 0.0 {
                    return Err(Error::Config {
                        line,
                        msg: "hop_shift_mean must be nonnegative".into(),
                    });
                }
            }
            "k" => {
                k = number(line, "k", value)?;
                if k == 0 {
                    return Err(Error::Config {
                        line,
                        msg: "k must be positive".into(),
                    });
                }
            }
            "on_reconfig_failure" => {
                b.on_reconfig_failure = FailurePolicy::parse(value).ok_or_else(|| Error::Config {
                    line,
                    msg: format!("invalid on_reconfig_failure `{value}`; allowed: teardown, keep_old"),
                })?
            }
            "label_cap" => {
                b.label_cap = if value.eq_ignore_ascii_case("none") {
                    None
                } else {
                    let cap: usize = number(line, "label_cap", value)?;
                    Some(cap.max(1))
                }
            }
            _ => unreachable!("key checked against KEYS"),
        }
    }

    cfg.routings = match routing_words {
        Some((_, words)) => words
            .iter()
            .map(|w| RoutingAlg::parse(w, k).expect("validated"))
            .collect(),
        None => cfg
            .routings
            .iter()
            .map(|r| match r {
                RoutingAlg::YenKsp(_) => RoutingAlg::YenKsp(k),
                other => *other,
            })
            .collect(),
    };
    Ok(cfg)
}
