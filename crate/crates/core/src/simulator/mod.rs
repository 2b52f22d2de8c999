//! Discrete-event simulation of connection arrivals, one endpoint move per
//! connection, and teardowns, with hourly measurements.

mod event;
mod metrics;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use event::{Event, EventKind, EventQueue};
pub use metrics::{mean_over_hours, population_mean, HourlyMetrics, Metric, MetricSummary, MetricValues, METRIC_COUNT};

use metrics::{HourAccumulator, ReconfigSample};

use crate::error::{Error, Result};
use crate::reconfig::{reconfigure_complete, reconfigure_proposed, Connection, Outcome, ReconfigAlg, ReconfigResult};
use crate::routing::{route_demand, RouteSetup, RoutingAlg};
use crate::spectrum::Policy;
use crate::topology::{generate_gabriel, graph_stats, EonGraph, GraphStats};
use crate::traffic::{lambda_for_load, sample_new_destination, DemandSampler, Streams, TrafficParams};

/// What happens to a connection whose endpoint move cannot be routed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailurePolicy {
    Teardown,
    KeepOld,
}

impl FailurePolicy {
    pub fn name(self) -> &'static str {
        match self {
            FailurePolicy::Teardown => "teardown",
            FailurePolicy::KeepOld => "keep_old",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "teardown" => Some(FailurePolicy::Teardown),
            "keep_old" => Some(FailurePolicy::KeepOld),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub nodes: usize,
    pub width_km: f64,
    pub height_km: f64,
    pub n_slices: usize,
    pub traffic: TrafficParams,
    pub routing: RoutingAlg,
    pub reconfig: ReconfigAlg,
    pub policy: Policy,
    pub horizon_h: f64,
    /// Hours at the start excluded from the report.
    pub warmup_h: f64,
    pub seed: u64,
    pub on_reconfig_failure: FailurePolicy,
    pub label_cap: Option<usize>,
    /// Verify spectrum bookkeeping after every event.
    pub check_invariants: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            nodes: 100,
            width_km: 1000.0,
            height_km: 1000.0,
            n_slices: 400,
            traffic: TrafficParams::default(),
            routing: RoutingAlg::Optimal,
            reconfig: ReconfigAlg::Proposed,
            policy: Policy::Fittest,
            horizon_h: 100.0,
            warmup_h: 0.0,
            seed: 1,
            on_reconfig_failure: FailurePolicy::Teardown,
            label_cap: None,
            check_invariants: false,
        }
    }
}

impl RunConfig {
    /// Stable 64-bit FNV-1a digest of every field except the seed.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.seed = 0;
        let text = format!("{c:?}");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Contract(format!("invalid run config: {msg}")));
        if self.nodes < 2 {
            return bad("need at least 2 nodes");
        }
        if !(self.width_km > 0.0 && self.height_km > 0.0) {
            return bad("area must be positive");
        }
        if self.n_slices == 0 {
            return bad("need at least one slice");
        }
        if self.horizon_h.is_nan() || self.horizon_h <= 0.0 {
            return bad("horizon must be positive");
        }
        if let RoutingAlg::YenKsp(0) = self.routing {
            return bad("k must be positive");
        }
        let t = &self.traffic;
        if !(t.beta_hours > 0.0 && t.gamma >= 1.0 && t.hop_shift_mean >= 0.0 && t.mu > 0.0) {
            return bad("traffic parameters out of range");
        }
        Ok(())
    }
}

/// Outcome counters of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunCounts {
    pub arrivals: u64,
    pub established: u64,
    pub reconfig_attempts: u64,
    pub bridged: u64,
    pub fallback: u64,
    pub reconfig_failed: u64,
    pub teardowns: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub seed: u64,
    pub config_digest: String,
    pub graph: GraphStats,
    pub lambda_h: f64,
    pub cap_km: u64,
    pub metrics: MetricValues,
    pub hours: Vec<HourlyMetrics>,
    pub counts: RunCounts,
}

impl RunReport {
    pub fn get(&self, m: Metric) -> Option<f64> {
        self.metrics.get(m)
    }
}

/// Live state of one run.
pub struct Network {
    pub graph: EonGraph,
    pub connections: BTreeMap<u64, Connection>,
}

/// Instantaneous network measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapshot {
    pub utilization: f64,
    pub active_connections: usize,
    pub capacity_served: u64,
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "utilization {:.4}, {} active, capacity {}",
            self.utilization, self.active_connections, self.capacity_served
        )
    }
}

impl Network {
    pub fn new(graph: EonGraph) -> Self {
        Network {
            graph,
            connections: BTreeMap::new(),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            utilization: self.graph.utilization(),
            active_connections: self.connections.len(),
            capacity_served: self
                .connections
                .values()
                .map(|c| c.slices_in_use() as u64 * c.path.length_km())
                .sum(),
        }
    }

    /// Occupied slices must equal the sum of width times hops over live connections.
    pub fn check_conservation(&self) -> Result<()> {
        let expected: usize = self
            .connections
            .values()
            .map(|c| c.width() * c.path.hops())
            .sum();
        let actual = self.graph.occupied_total();
        if expected != actual {
            return Err(Error::Contract(format!(
                "spectrum conservation broken: {actual} occupied, {expected} expected"
            )));
        }
        Ok(())
    }
}

/// Generates the run's graph and simulates it.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let graph = generate_run_graph(cfg);
    run_on_graph(cfg, graph)
}

/// The topology a run with this config uses; depends on the seed and graph
/// parameters only.
pub fn generate_run_graph(cfg: &RunConfig) -> EonGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    generate_gabriel(cfg.nodes, cfg.width_km, cfg.height_km, cfg.n_slices, &mut rng)
}

/// Simulates on a given (spectrum-empty) graph.
pub fn run_on_graph(cfg: &RunConfig, graph: EonGraph) -> Result<RunReport> {
    cfg.validate()?;
    if graph.occupied_total() != 0 {
        return Err(Error::Contract("run must start on an empty network".into()));
    }
    let stats = graph_stats(&graph)?;
    let cap_km = 2 * stats.diameter_km;
    let lambda_h = lambda_for_load(
        cfg.traffic.mu,
        stats.alpha,
        cfg.traffic.beta_hours,
        cfg.traffic.gamma,
        stats.link_count,
        graph.n_slices(),
    )?;
    let setup = RouteSetup {
        alg: cfg.routing,
        policy: cfg.policy,
        cap_km,
        label_cap: cfg.label_cap,
    };

    let mut sim = Sim {
        cfg,
        setup,
        net: Network::new(graph),
        streams: Streams::new(cfg.seed),
        sampler: DemandSampler::new(cfg.traffic, lambda_h),
        queue: EventQueue::default(),
        reconfigured: Default::default(),
        counts: RunCounts::default(),
        current: HourAccumulator::default(),
        current_hour: 0,
        hours: Vec::new(),
        next_conn: 0,
    };
    sim.execute()?;

    let kept: Vec<HourlyMetrics> = sim
        .hours
        .into_iter()
        .filter(|h| h.hour as f64 > cfg.warmup_h)
        .collect();
    Ok(RunReport {
        seed: cfg.seed,
        config_digest: cfg.digest(),
        graph: stats,
        lambda_h,
        cap_km,
        metrics: mean_over_hours(&kept),
        hours: kept,
        counts: sim.counts,
    })
}

struct Sim<'a> {
    cfg: &'a RunConfig,
    setup: RouteSetup,
    net: Network,
    streams: Streams,
    sampler: DemandSampler,
    queue: EventQueue,
    reconfigured: std::collections::BTreeSet<u64>,
    counts: RunCounts,
    current: HourAccumulator,
    /// Zero-based index of the hour being accumulated.
    current_hour: usize,
    hours: Vec<HourlyMetrics>,
    next_conn: u64,
}

impl Sim<'_> {
    fn execute(&mut self) -> Result<()> {
        let horizon = self.cfg.horizon_h;
        let ticks = horizon.floor() as usize;
        let mut pending = self.sampler.next(&self.net.graph, 0.0, &mut self.streams);
        self.queue.push(Event {
            time_h: pending.arrival_h,
            kind: EventKind::Arrival,
            id: 0,
        });
        let mut arrival_seq = 0u64;

        loop {
            let next = self.queue.peek_time().unwrap_or(f64::INFINITY);
            while self.current_hour < ticks && next >= (self.current_hour + 1) as f64 {
                self.tick();
            }
            if next > horizon {
                break;
            }
            let ev = self.queue.pop().expect("peeked");
            match ev.kind {
                EventKind::Arrival => {
                    self.arrival(pending)?;
                    arrival_seq += 1;
                    pending = self.sampler.next(&self.net.graph, ev.time_h, &mut self.streams);
                    self.queue.push(Event {
                        time_h: pending.arrival_h,
                        kind: EventKind::Arrival,
                        id: arrival_seq,
                    });
                }
                EventKind::Reconfigure => self.reconfigure(ev.id)?,
                EventKind::Teardown => self.teardown(ev.id)?,
            }
            if self.cfg.check_invariants {
                self.net.check_conservation()?;
            }
        }
        while self.current_hour < ticks {
            self.tick();
        }
        Ok(())
    }

    fn tick(&mut self) {
        let snap = self.net.snapshot();
        let acc = std::mem::take(&mut self.current);
        self.current_hour += 1;
        self.hours.push(acc.finish(
            self.current_hour,
            snap.utilization,
            snap.active_connections,
            snap.capacity_served,
        ));
    }

    fn arrival(&mut self, d: crate::traffic::Demand) -> Result<()> {
        self.counts.arrivals += 1;
        let routed = route_demand(&self.net.graph, d.src, d.dst, d.width, &self.setup, &mut self.streams.policy);
        let Some((path, slot)) = routed else {
            self.current.establish(None);
            return Ok(());
        };
        self.net.graph.allocate(&path, slot)?;
        self.counts.established += 1;
        self.current.establish(Some((path.length_km(), slot.width())));

        let id = self.next_conn;
        self.next_conn += 1;
        let u: f64 = self.streams.reconfig_times.random();
        self.queue.push(Event {
            time_h: d.arrival_h + u * d.holding_h,
            kind: EventKind::Reconfigure,
            id,
        });
        self.queue.push(Event {
            time_h: d.arrival_h + d.holding_h,
            kind: EventKind::Teardown,
            id,
        });
        self.net.connections.insert(
            id,
            Connection {
                id,
                s: d.src,
                t: d.dst,
                path,
                slot,
            },
        );
        Ok(())
    }

    fn reconfigure(&mut self, id: u64) -> Result<()> {
        let Some(conn) = self.net.connections.get(&id).cloned() else {
            return Ok(());
        };
        if !self.reconfigured.insert(id) {
            return Err(Error::Contract(format!("connection {id} reconfigured twice")));
        }
        self.counts.reconfig_attempts += 1;
        let t_new = sample_new_destination(
            &self.net.graph,
            conn.t,
            self.cfg.traffic.hop_shift_mean,
            &mut self.streams.targets,
        );
        let result = match self.cfg.reconfig {
            ReconfigAlg::Proposed => {
                reconfigure_proposed(&self.net.graph, &conn, t_new, &self.setup, &mut self.streams.policy)
            }
            ReconfigAlg::Complete => {
                reconfigure_complete(&mut self.net.graph, &conn, t_new, &self.setup, &mut self.streams.policy)?
            }
        };
        self.apply(conn, t_new, result)
    }

    fn apply(&mut self, conn: Connection, t_new: usize, result: ReconfigResult) -> Result<()> {
        match (result.outcome, result.new_path, result.new_slot) {
            (Outcome::Failed, _, _) | (_, None, _) | (_, _, None) => {
                self.counts.reconfig_failed += 1;
                self.current.reconfigure(None);
                if self.cfg.on_reconfig_failure == FailurePolicy::Teardown {
                    self.net.graph.release(&conn.path, conn.slot)?;
                    self.net.connections.remove(&conn.id);
                }
            }
            (outcome, Some(path), Some(slot)) => {
                if let Outcome::Bridged(_) = outcome {
                    if slot != conn.slot {
                        return Err(Error::Contract(format!("bridged connection {} changed slot", conn.id)));
                    }
                    self.counts.bridged += 1;
                } else {
                    self.counts.fallback += 1;
                }
                self.net.graph.release(&conn.path, conn.slot)?;
                self.net.graph.allocate(&path, slot)?;
                let updated = Connection {
                    t: t_new,
                    path,
                    slot,
                    ..conn
                };
                self.current.reconfigure(Some(ReconfigSample {
                    new_links: result.new_link_count,
                    reused_links: result.reused_link_count,
                    all_links: updated.path.hops(),
                    length_km: updated.path.length_km(),
                    width: updated.slices_in_use(),
                }));
                self.net.connections.insert(updated.id, updated);
            }
        }
        Ok(())
    }

    fn teardown(&mut self, id: u64) -> Result<()> {
        if let Some(conn) = self.net.connections.remove(&id) {
            self.net.graph.release(&conn.path, conn.slot)?;
            self.counts.teardowns += 1;
        }
        Ok(())
    }
}
