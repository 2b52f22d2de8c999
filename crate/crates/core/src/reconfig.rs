//! Moving the far endpoint of an established connection.
//!
//! The bridging algorithm keeps the connection's slot and looks, for every
//! node `n` of the current path, for a path from `n` to the new destination
//! that is free on exactly those slices. The front of the old path up to `n`
//! plus that bridge forms a candidate; the candidate needing the fewest new
//! links wins. When no bridge exists, it falls back to routing from the
//! source with any free slot.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::routing::{link_disjoint_paths, route_demand, yen_paths, Path, RouteSetup, RoutingAlg, SptSearch};
use crate::spectrum::{SliceSet, Slot};
use crate::topology::{EonGraph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub id: u64,
    pub s: NodeId,
    pub t: NodeId,
    pub path: Path,
    pub slot: Slot,
}

impl Connection {
    pub fn width(&self) -> usize {
        self.slot.width()
    }

    /// Slices actually held: zero once the path has collapsed to a node.
    pub fn slices_in_use(&self) -> usize {
        if self.path.is_empty() {
            0
        } else {
            self.width()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub via: NodeId,
    pub path: Path,
    pub new_links: usize,
    pub total_links: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Bridged(NodeId),
    Complete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconfigResult {
    pub outcome: Outcome,
    pub new_path: Option<Path>,
    pub new_slot: Option<Slot>,
    pub new_link_count: usize,
    pub reused_link_count: usize,
}

impl ReconfigResult {
    fn failed() -> Self {
        ReconfigResult {
            outcome: Outcome::Failed,
            new_path: None,
            new_slot: None,
            new_link_count: 0,
            reused_link_count: 0,
        }
    }

    fn complete(conn: &Connection, path: Path, slot: Slot) -> Self {
        let (new, reused) = count_link_changes(&conn.path, conn.slot, &path, slot);
        ReconfigResult {
            outcome: Outcome::Complete,
            new_path: Some(path),
            new_slot: Some(slot),
            new_link_count: new,
            reused_link_count: reused,
        }
    }

    pub fn succeeded(&self) -> bool {
        self.outcome != Outcome::Failed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReconfigAlg {
    Proposed,
    Complete,
}

impl ReconfigAlg {
    pub fn name(self) -> &'static str {
        match self {
            ReconfigAlg::Proposed => "proposed",
            ReconfigAlg::Complete => "complete",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" | "bridging" => Some(ReconfigAlg::Proposed),
            "complete" => Some(ReconfigAlg::Complete),
            _ => None,
        }
    }
}

impl fmt::Display for ReconfigAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Front of `path` up to and including `n`.
pub fn cut(g: &EonGraph, path: &Path, n: NodeId) -> Path {
    let i = path
        .position(n)
        .unwrap_or_else(|| panic!("cut: node {n} not on {path:?}"));
    path.prefix(g, i)
}

/// Fewer new links first, then fewer links overall, then lower node id.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    (a.new_links, a.total_links, a.via).cmp(&(b.new_links, b.total_links, b.via))
}

/// New and reused links of a reconfigured connection. A link is reused only
/// when it was on the old path and the slot has not changed.
pub fn count_link_changes(old_path: &Path, old_slot: Slot, new_path: &Path, new_slot: Slot) -> (usize, usize) {
    if new_slot != old_slot {
        return (new_path.hops(), 0);
    }
    let reused = new_path
        .links()
        .iter()
        .filter(|e| old_path.links().contains(e))
        .count();
    (new_path.hops() - reused, reused)
}

/// Bridging paths from each node of the connection to `t_new`, free on the
/// connection's own slices. The graph still holds the connection, so its
/// links are never part of a bridge.
fn bridges(g: &EonGraph, conn: &Connection, t_new: NodeId, setup: &RouteSetup) -> Vec<(NodeId, Path)> {
    let slices = conn.slot.to_set(g.n_slices());
    let nodes = conn.path.nodes();
    match setup.alg {
        RoutingAlg::Optimal => {
            let mut front = vec![false; g.node_count()];
            let mut front_km = 0;
            let mut out = Vec::new();
            for (i, &n) in nodes.iter().enumerate() {
                if i > 0 {
                    front[nodes[i - 1]] = true;
                    front_km += g.link(conn.path.links()[i - 1]).length_km;
                }
                let Some(budget) = setup.cap_km.checked_sub(front_km) else {
                    break;
                };
                if let Some(b) = fewest_hop_bridge(g, n, t_new, &slices, &front, budget) {
                    out.push((n, b));
                }
            }
            out
        }
        RoutingAlg::YenKsp(k) => nodes
            .iter()
            .filter_map(|&n| {
                heuristic_bridge(g, n, t_new, &slices, setup.cap_km, |g, a, b| yen_paths(g, a, b, k))
                    .map(|b| (n, b))
            })
            .collect(),
        RoutingAlg::LdAsp => nodes
            .iter()
            .filter_map(|&n| {
                heuristic_bridge(g, n, t_new, &slices, setup.cap_km, link_disjoint_paths)
                    .map(|b| (n, b))
            })
            .collect(),
    }
}

/// Path from `from` to `to` over links free on all of `slices`, avoiding
/// `blocked` nodes, at most `budget_km` long, with the fewest hops and then
/// the shortest length.
///
/// Hop-layered Bellman-Ford: after layer h, `dist[v]` is the shortest walk of
/// at most h hops. The first layer that brings `to` within budget gives the
/// hop minimum, and a shortest walk for a hop bound is always simple.
pub fn fewest_hop_bridge(
    g: &EonGraph,
    from: NodeId,
    to: NodeId,
    slices: &SliceSet,
    blocked: &[bool],
    budget_km: u64,
) -> Option<Path> {
    if blocked[from] || blocked[to] {
        return None;
    }
    if from == to {
        return Some(Path::empty(from));
    }
    let n = g.node_count();
    let mut dist = vec![u64::MAX; n];
    dist[from] = 0;
    let mut layers: Vec<Vec<Option<(NodeId, usize)>>> = Vec::new();
    for _ in 1..n {
        let mut next = dist.clone();
        let mut parent = vec![None; n];
        for (v, &dv) in dist.iter().enumerate() {
            if dv == u64::MAX {
                continue;
            }
            for &(w, e) in g.neighbors(v) {
                if blocked[w] || !g.available(e).is_superset(slices) {
                    continue;
                }
                let d = dv + g.link(e).length_km;
                if d < next[w] {
                    next[w] = d;
                    parent[w] = Some((v, e));
                }
            }
        }
        let changed = parent.iter().any(Option::is_some);
        layers.push(parent);
        dist = next;
        if dist[to] != u64::MAX && dist[to] <= budget_km {
            let mut links = Vec::new();
            let mut at = to;
            for layer in layers.iter().rev() {
                if let Some((v, e)) = layer[at] {
                    links.push(e);
                    at = v;
                }
            }
            debug_assert_eq!(at, from);
            let mut path = Path::empty(from);
            for &e in links.iter().rev() {
                path.push(g, e);
            }
            return Some(path);
        }
        if !changed {
            break;
        }
    }
    None
}

fn heuristic_bridge(
    g: &EonGraph,
    n: NodeId,
    t_new: NodeId,
    slices: &SliceSet,
    cap_km: u64,
    enumerate: impl Fn(&EonGraph, NodeId, NodeId) -> Vec<Path>,
) -> Option<Path> {
    if n == t_new {
        return Some(Path::empty(n));
    }
    enumerate(g, n, t_new)
        .into_iter()
        .filter(|p| p.length_km() <= cap_km && g.path_available(p).is_superset(slices))
        .min_by_key(|p| p.length_km())
}

/// All bridging candidates for moving `conn`'s destination to `t_new`.
pub fn bridging_candidates(g: &EonGraph, conn: &Connection, t_new: NodeId, setup: &RouteSetup) -> Vec<Candidate> {
    bridges(g, conn, t_new, setup)
        .into_iter()
        .filter_map(|(n, bridge)| {
            let front = cut(g, &conn.path, n);
            let path = front.concat(&bridge);
            (path.is_simple() && path.length_km() <= setup.cap_km).then(|| Candidate {
                via: n,
                new_links: bridge.hops(),
                total_links: path.hops(),
                path,
            })
        })
        .collect()
}

/// Bridging reconfiguration with fallback to rerouting from the source.
///
/// `g` must still hold `conn`'s resources; the caller applies the result.
pub fn reconfigure_proposed<R: Rng + ?Sized>(
    g: &EonGraph,
    conn: &Connection,
    t_new: NodeId,
    setup: &RouteSetup,
    rng: &mut R,
) -> ReconfigResult {
    let candidates = bridging_candidates(g, conn, t_new, setup);
    if let Some(best) = candidates.into_iter().min_by(candidate_order) {
        return ReconfigResult {
            outcome: Outcome::Bridged(best.via),
            new_link_count: best.new_links,
            reused_link_count: best.total_links - best.new_links,
            new_path: Some(best.path),
            new_slot: Some(conn.slot),
        };
    }

    let found = match setup.alg {
        RoutingAlg::Optimal => {
            let universe = SliceSet::full(g.n_slices());
            SptSearch {
                root: t_new,
                stop_nodes: &[conn.s],
                width: conn.width(),
                universe: &universe,
                cap_km: setup.cap_km,
                label_cap: setup.label_cap,
            }
            .run(g)
            .reversed()
            .extract_any(conn.s, conn.width(), setup.policy, rng)
        }
        _ => route_demand(g, conn.s, t_new, conn.width(), setup, rng),
    };
    match found {
        Some((path, slot)) => ReconfigResult::complete(conn, path, slot),
        None => ReconfigResult::failed(),
    }
}

/// Tear down and reroute from the source with any free slot.
///
/// The search runs with `conn`'s resources released; they are restored
/// before returning so `g` is unchanged.
pub fn reconfigure_complete<R: Rng + ?Sized>(
    g: &mut EonGraph,
    conn: &Connection,
    t_new: NodeId,
    setup: &RouteSetup,
    rng: &mut R,
) -> Result<ReconfigResult> {
    if t_new == conn.s {
        return Ok(ReconfigResult::complete(conn, Path::empty(conn.s), conn.slot));
    }
    g.release(&conn.path, conn.slot)?;
    let found = route_demand(g, conn.s, t_new, conn.width(), setup, rng);
    g.allocate(&conn.path, conn.slot)?;
    Ok(match found {
        Some((path, slot)) => ReconfigResult::complete(conn, path, slot),
        None => ReconfigResult::failed(),
    })
}
