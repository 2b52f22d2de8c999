//! Network topology, spectrum state on links, and graph statistics.

mod gabriel;
mod io;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub use gabriel::{gabriel_condition, generate_gabriel, Point};

use crate::error::{Error, Result};
use crate::routing::Path;
use crate::spectrum::{SliceSet, Slot};

pub type NodeId = usize;
pub type LinkId = usize;

/// An undirected fiber link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub length_km: u64,
    free: SliceSet,
}

impl Link {
    pub fn other(&self, n: NodeId) -> NodeId {
        if n == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn available(&self) -> &SliceSet {
        &self.free
    }

    pub fn occupied(&self) -> SliceSet {
        self.free.complement()
    }
}

/// Undirected topology with per-link spectrum occupancy.
#[derive(Clone, Debug)]
pub struct EonGraph {
    coords: Vec<Point>,
    links: Vec<Link>,
    adj: Vec<Vec<(NodeId, LinkId)>>,
    n_slices: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphStats {
    /// Mean hop count over the shortest (by length) paths of all node pairs.
    pub alpha: f64,
    /// Mean shortest-path length over all node pairs, km.
    pub mean_sp_length_km: f64,
    /// Length of the longest shortest path, km.
    pub diameter_km: u64,
    pub link_count: usize,
    pub mean_degree: f64,
    pub mean_link_length_km: f64,
}

impl EonGraph {
    pub fn new(coords: Vec<Point>, n_slices: usize) -> Self {
        assert!(n_slices >= 1, "need at least one slice per link");
        let adj = vec![Vec::new(); coords.len()];
        EonGraph {
            coords,
            links: Vec::new(),
            adj,
            n_slices,
        }
    }

    /// A graph without coordinates; nodes sit at the origin.
    pub fn with_nodes(n: usize, n_slices: usize) -> Self {
        Self::new(vec![Point::new(0.0, 0.0); n], n_slices)
    }

    pub fn add_link(&mut self, a: NodeId, b: NodeId, length_km: u64) -> LinkId {
        assert!(a != b, "self-loop at node {a}");
        assert!(a < self.node_count() && b < self.node_count(), "link endpoint out of range");
        assert!(length_km >= 1, "link length must be at least 1 km");
        assert!(self.link_between(a, b).is_none(), "parallel link {a}-{b}");
        let id = self.links.len();
        self.links.push(Link {
            a,
            b,
            length_km,
            free: SliceSet::full(self.n_slices),
        });
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        id
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, LinkId)] {
        &self.adj[n]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.adj[n].len()
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        self.adj[a].iter().find(|(m, _)| *m == b).map(|&(_, e)| e)
    }

    pub fn available(&self, e: LinkId) -> &SliceSet {
        &self.links[e].free
    }

    /// Slices free on every link of `path`; the full universe for an empty path.
    pub fn path_available(&self, path: &Path) -> SliceSet {
        let mut s = SliceSet::full(self.n_slices);
        for &e in path.links() {
            s.intersect_with(&self.links[e].free);
        }
        s
    }

    /// Total number of occupied slices summed over links.
    pub fn occupied_total(&self) -> usize {
        self.links
            .iter()
            .map(|l| self.n_slices - l.free.len())
            .sum()
    }

    pub fn utilization(&self) -> f64 {
        if self.links.is_empty() {
            return 0.0;
        }
        self.occupied_total() as f64 / (self.links.len() * self.n_slices) as f64
    }

    /// Marks `slot` as in use on every link of `path`.
    pub fn allocate(&mut self, path: &Path, slot: Slot) -> Result<()> {
        self.check_slot(slot)?;
        for &e in path.links() {
            if !self.links[e].free.contains_slot(slot) {
                return Err(Error::Contract(format!(
                    "allocate {slot} on link {e}: slices not free ({:?})",
                    self.links[e].free
                )));
            }
        }
        for &e in path.links() {
            for i in slot.lo..slot.hi {
                self.links[e].free.remove(i);
            }
        }
        Ok(())
    }

    /// Frees `slot` on every link of `path`.
    pub fn release(&mut self, path: &Path, slot: Slot) -> Result<()> {
        self.check_slot(slot)?;
        for &e in path.links() {
            let free = &self.links[e].free;
            if (slot.lo..slot.hi).any(|i| free.contains(i)) {
                return Err(Error::Contract(format!(
                    "release {slot} on link {e}: slices not occupied ({free:?})"
                )));
            }
        }
        for &e in path.links() {
            for i in slot.lo..slot.hi {
                self.links[e].free.insert(i);
            }
        }
        Ok(())
    }

    fn check_slot(&self, slot: Slot) -> Result<()> {
        if slot.lo >= slot.hi || slot.hi > self.n_slices {
            return Err(Error::Contract(format!(
                "slot {slot} outside universe of {} slices",
                self.n_slices
            )));
        }
        Ok(())
    }

    /// Clears all spectrum occupancy.
    pub fn reset_spectrum(&mut self) {
        for l in &mut self.links {
            l.free = SliceSet::full(self.n_slices);
        }
    }

    /// Sets the free slices of one link directly. Intended for fixtures.
    pub fn set_available(&mut self, e: LinkId, free: SliceSet) {
        assert_eq!(free.universe(), self.n_slices);
        self.links[e].free = free;
    }

    /// Unweighted hop distances from `from`; `usize::MAX` for unreachable nodes.
    pub fn hop_distances(&self, from: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest distances by length from `from`, with the fewest hops among
    /// equal-length paths. Unreachable nodes get `None`.
    pub fn shortest_distances(&self, from: NodeId) -> Vec<Option<(u64, usize)>> {
        let mut best: Vec<Option<(u64, usize)>> = vec![None; self.node_count()];
        let mut heap = BinaryHeap::new();
        best[from] = Some((0, 0));
        heap.push(Reverse((0u64, 0usize, from)));
        while let Some(Reverse((d, h, u))) = heap.pop() {
            if best[u] != Some((d, h)) {
                continue;
            }
            for &(v, e) in &self.adj[u] {
                let cand = (d + self.links[e].length_km, h + 1);
                if best[v].is_none_or(|cur| cand < cur) {
                    best[v] = Some(cand);
                    heap.push(Reverse((cand.0, cand.1, v)));
                }
            }
        }
        best
    }
}

/// All-pairs statistics. Fails on a disconnected graph.
pub fn graph_stats(g: &EonGraph) -> Result<GraphStats> {
    let n = g.node_count();
    let mut hop_sum = 0u64;
    let mut len_sum = 0u64;
    let mut pairs = 0u64;
    let mut diameter = 0u64;
    for u in 0..n {
        let dist = g.shortest_distances(u);
        for (v, d) in dist.iter().enumerate().skip(u + 1) {
            let (len, hops) = d.ok_or(Error::Disconnected(v))?;
            hop_sum += hops as u64;
            len_sum += len;
            pairs += 1;
            diameter = diameter.max(len);
        }
        if u == 0 {
            if let Some(v) = dist.iter().position(Option::is_none) {
                return Err(Error::Disconnected(v));
            }
        }
    }
    let m = g.link_count();
    let total_len: u64 = g.links.iter().map(|l| l.length_km).sum();
    let ratio = |a: f64, b: u64| if b == 0 { 0.0 } else { a / b as f64 };
    Ok(GraphStats {
        alpha: ratio(hop_sum as f64, pairs),
        mean_sp_length_km: ratio(len_sum as f64, pairs),
        diameter_km: diameter,
        link_count: m,
        mean_degree: ratio(2.0 * m as f64, n as u64),
        mean_link_length_km: ratio(total_len as f64, m as u64),
    })
}
