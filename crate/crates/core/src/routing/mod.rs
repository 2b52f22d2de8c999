//! Routing and spectrum assignment.

mod ksp;
mod path;
mod spt;

use std::fmt;

use rand::Rng;

pub use ksp::{dijkstra, link_disjoint_paths, yen_paths};
pub use path::Path;
pub use spt::{constrained_spt, Label, Orientation, SpTree, SptSearch};

use crate::spectrum::{select_slot, supports, Policy, SliceSet, Slot};
use crate::topology::{EonGraph, NodeId};

pub const DEFAULT_K: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoutingAlg {
    /// Constrained label-setting search; finds the shortest feasible path.
    Optimal,
    /// First feasible path among Yen's k shortest.
    YenKsp(usize),
    /// Shortest feasible path among iterated link-disjoint shortest paths.
    LdAsp,
}

impl RoutingAlg {
    pub fn name(self) -> &'static str {
        match self {
            RoutingAlg::Optimal => "optimal",
            RoutingAlg::YenKsp(_) => "yen",
            RoutingAlg::LdAsp => "ldasp",
        }
    }

    /// Parses `optimal`, `yen` (using `k`), or `ldasp`.
    pub fn parse(s: &str, k: usize) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "optimal" => Some(RoutingAlg::Optimal),
            "yen" | "yen-ksp" | "yenksp" => Some(RoutingAlg::YenKsp(k)),
            "ldasp" | "ld-asp" => Some(RoutingAlg::LdAsp),
            _ => None,
        }
    }
}

impl fmt::Display for RoutingAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Routing settings shared by every search in one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteSetup {
    pub alg: RoutingAlg,
    pub policy: Policy,
    /// No path longer than this is ever used.
    pub cap_km: u64,
    pub label_cap: Option<usize>,
}

impl RouteSetup {
    pub fn new(alg: RoutingAlg, policy: Policy, cap_km: u64) -> Self {
        RouteSetup {
            alg,
            policy,
            cap_km,
            label_cap: None,
        }
    }
}

/// First of up to `k` shortest paths whose free slices can carry `width`.
pub fn yen_ksp(
    g: &EonGraph,
    s: NodeId,
    t: NodeId,
    k: usize,
    width: usize,
    cap_km: u64,
) -> Option<(Path, SliceSet)> {
    assert!(k >= 1, "k must be positive");
    yen_paths(g, s, t, k)
        .into_iter()
        .filter(|p| p.length_km() <= cap_km)
        .map(|p| {
            let avail = g.path_available(&p);
            (p, avail)
        })
        .find(|(_, avail)| supports(avail, width))
}

/// Shortest link-disjoint path whose free slices can carry `width`.
pub fn ld_asp(
    g: &EonGraph,
    s: NodeId,
    t: NodeId,
    width: usize,
    cap_km: u64,
) -> Option<(Path, SliceSet)> {
    link_disjoint_paths(g, s, t)
        .into_iter()
        .filter(|p| p.length_km() <= cap_km)
        .map(|p| {
            let avail = g.path_available(&p);
            (p, avail)
        })
        .filter(|(_, avail)| supports(avail, width))
        // min_by_key keeps the earliest of equal lengths.
        .min_by_key(|(p, _)| p.length_km())
}

/// Finds a path from `s` to `t` and a `width`-slice slot free along it.
/// `None` means the demand is blocked.
pub fn route_demand<R: Rng + ?Sized>(
    g: &EonGraph,
    s: NodeId,
    t: NodeId,
    width: usize,
    setup: &RouteSetup,
    rng: &mut R,
) -> Option<(Path, Slot)> {
    assert!(width >= 1, "width must be positive");
    match setup.alg {
        RoutingAlg::Optimal => {
            let universe = SliceSet::full(g.n_slices());
            let tree = SptSearch {
                root: s,
                stop_nodes: &[t],
                width,
                universe: &universe,
                cap_km: setup.cap_km,
                label_cap: setup.label_cap,
            }
            .run(g);
            tree.extract_any(t, width, setup.policy, rng)
        }
        RoutingAlg::YenKsp(k) => {
            let (p, avail) = yen_ksp(g, s, t, k, width, setup.cap_km)?;
            select_slot(&avail, width, setup.policy, rng).map(|slot| (p, slot))
        }
        RoutingAlg::LdAsp => {
            let (p, avail) = ld_asp(g, s, t, width, setup.cap_km)?;
            select_slot(&avail, width, setup.policy, rng).map(|slot| (p, slot))
        }
    }
}
