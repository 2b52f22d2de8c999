//! Demand generation and the offered-load to arrival-rate conversion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};

use crate::error::{Error, Result};
use crate::topology::{EonGraph, NodeId};

/// The 26 offered loads 0.10, 0.15, ..., 0.70, 0.80, ..., 2.00.
pub fn default_loads() -> Vec<f64> {
    let fine = (0..13).map(|i| (10 + 5 * i) as f64 / 100.0);
    let coarse = (8..=20).map(|i| i as f64 / 10.0);
    fine.chain(coarse).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrafficParams {
    /// Mean holding time, hours.
    pub beta_hours: f64,
    /// Mean demand width, slices.
    pub gamma: f64,
    /// Mean of the Poisson part of the hop distance to a new destination.
    pub hop_shift_mean: f64,
    /// Offered load.
    pub mu: f64,
}

impl Default for TrafficParams {
    fn default() -> Self {
        TrafficParams {
            beta_hours: 10.0,
            gamma: 10.0,
            hop_shift_mean: 0.5,
            mu: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Demand {
    pub src: NodeId,
    pub dst: NodeId,
    pub width: usize,
    pub arrival_h: f64,
    pub holding_h: f64,
}

/// Mean inter-arrival time in hours that offers load `mu` to a network with
/// `n_links` links of `n_slices` slices, mean shortest-path hop count `alpha`,
/// mean holding time `beta` and mean width `gamma`.
pub fn lambda_for_load(mu: f64, alpha: f64, beta: f64, gamma: f64, n_links: usize, n_slices: usize) -> Result<f64> {
    let args = [mu, alpha, beta, gamma, n_links as f64, n_slices as f64];
    if args.iter().any(|&x| !x.is_finite() || x <= 0.0) {
        return Err(Error::Contract(format!("lambda_for_load needs positive finite inputs, got {args:?}")));
    }
    Ok(alpha * beta * gamma / (mu * n_links as f64 * n_slices as f64))
}

/// Poisson(mean) + 1, with a zero mean giving a constant 1.
fn shifted_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 1;
    }
    let p = Poisson::new(mean).expect("positive Poisson mean");
    p.sample(rng) as usize + 1
}

fn exp_sample<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    Exp::new(1.0 / mean).expect("positive mean").sample(rng)
}

fn sample_endpoints<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (NodeId, NodeId) {
    assert!(n >= 2, "need two nodes for a demand");
    let src = rng.random_range(0..n);
    let mut dst = rng.random_range(0..n - 1);
    if dst >= src {
        dst += 1;
    }
    (src, dst)
}

/// Draws one demand from a single random stream. Arrival is `now_h` plus an
/// exponential gap of mean `lambda_h`.
pub fn sample_demand<R: Rng + ?Sized>(
    g: &EonGraph,
    params: &TrafficParams,
    lambda_h: f64,
    now_h: f64,
    rng: &mut R,
) -> Demand {
    let arrival_h = now_h + exp_sample(lambda_h, rng);
    let (src, dst) = sample_endpoints(g.node_count(), rng);
    Demand {
        src,
        dst,
        width: shifted_poisson(params.gamma - 1.0, rng),
        arrival_h,
        holding_h: exp_sample(params.beta_hours, rng),
    }
}

/// A node whose hop distance from `t` is Poisson(`shift_mean`) + 1, clamped
/// to the farthest nonempty ring. Never `t` itself.
pub fn sample_new_destination<R: Rng + ?Sized>(g: &EonGraph, t: NodeId, shift_mean: f64, rng: &mut R) -> NodeId {
    let dist = g.hop_distances(t);
    let want = shifted_poisson(shift_mean, rng);
    let farthest = dist
        .iter()
        .copied()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0);
    assert!(farthest >= 1, "node {t} has no neighbours");
    let d = want.min(farthest);
    let ring: Vec<NodeId> = (0..dist.len()).filter(|&v| dist[v] == d).collect();
    ring[rng.random_range(0..ring.len())]
}

/// Independent random streams, one per consumer, derived from a run seed.
#[derive(Clone, Debug)]
pub struct Streams {
    pub arrivals: ChaCha8Rng,
    pub endpoints: ChaCha8Rng,
    pub widths: ChaCha8Rng,
    pub holdings: ChaCha8Rng,
    pub targets: ChaCha8Rng,
    pub reconfig_times: ChaCha8Rng,
    pub policy: ChaCha8Rng,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        let stream = |k: u64| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(k + 1);
            r
        };
        Streams {
            arrivals: stream(0),
            endpoints: stream(1),
            widths: stream(2),
            holdings: stream(3),
            targets: stream(4),
            reconfig_times: stream(5),
            policy: stream(6),
        }
    }
}

/// Demand source drawing each quantity from its own stream.
#[derive(Clone, Debug)]
pub struct DemandSampler {
    params: TrafficParams,
    gap: Exp<f64>,
    holding: Exp<f64>,
    width: Option<Poisson<f64>>,
}

impl DemandSampler {
    pub fn new(params: TrafficParams, lambda_h: f64) -> Self {
        DemandSampler {
            params,
            gap: Exp::new(1.0 / lambda_h).expect("positive lambda"),
            holding: Exp::new(1.0 / params.beta_hours).expect("positive beta"),
            width: (params.gamma > 1.0).then(|| Poisson::new(params.gamma - 1.0).expect("positive mean")),
        }
    }

    pub fn params(&self) -> &TrafficParams {
        &self.params
    }

    pub fn next(&self, g: &EonGraph, now_h: f64, streams: &mut Streams) -> Demand {
        let arrival_h = now_h + self.gap.sample(&mut streams.arrivals);
        let (src, dst) = sample_endpoints(g.node_count(), &mut streams.endpoints);
        let width = match &self.width {
            Some(p) => p.sample(&mut streams.widths) as usize + 1,
            None => 1,
        };
        Demand {
            src,
            dst,
            width,
            arrival_h,
            holding_h: self.holding.sample(&mut streams.holdings),
        }
    }
}
