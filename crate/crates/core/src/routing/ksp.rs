//! Spectrum-blind path enumeration: Dijkstra, Yen's k shortest loopless
//! paths, and link-disjoint shortest paths.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::Path;
use crate::topology::{EonGraph, LinkId, NodeId};

/// Shortest path by length avoiding the masked links and nodes. Ties between
/// equal-length routes resolve to the one settled first from lower node ids.
pub fn dijkstra(
    g: &EonGraph,
    s: NodeId,
    t: NodeId,
    link_off: &[bool],
    node_off: &[bool],
) -> Option<Path> {
    if node_off[s] || node_off[t] {
        return None;
    }
    let n = g.node_count();
    let mut dist = vec![u64::MAX; n];
    let mut pred: Vec<Option<(NodeId, LinkId)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == t {
            break;
        }
        for &(v, e) in g.neighbors(u) {
            if link_off[e] || node_off[v] || done[v] {
                continue;
            }
            let nd = d + g.link(e).length_km;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some((u, e));
                heap.push(Reverse((nd, v)));
            }
        }
    }
    if !done[t] {
        return None;
    }
    let mut nodes = vec![t];
    let mut links = Vec::new();
    let mut cur = t;
    while let Some((p, e)) = pred[cur] {
        nodes.push(p);
        links.push(e);
        cur = p;
    }
    nodes.reverse();
    links.reverse();
    Some(Path::from_parts(nodes, links, dist[t]))
}

/// Up to `k` loopless `s`-`t` paths in nondecreasing length. Equal lengths
/// are ordered by node sequence.
pub fn yen_paths(g: &EonGraph, s: NodeId, t: NodeId, k: usize) -> Vec<Path> {
    let mut link_off = vec![false; g.link_count()];
    let mut node_off = vec![false; g.node_count()];
    let Some(first) = dijkstra(g, s, t, &link_off, &node_off) else {
        return Vec::new();
    };
    let mut accepted = vec![first];
    let mut candidates: BTreeSet<(u64, Vec<NodeId>)> = BTreeSet::new();

    while accepted.len() < k {
        let prev = accepted.last().expect("nonempty").clone();
        for i in 0..prev.hops() {
            let spur = prev.nodes()[i];
            let root = &prev.nodes()[..=i];
            for p in &accepted {
                if p.nodes().len() > i + 1 && &p.nodes()[..=i] == root {
                    link_off[p.links()[i]] = true;
                }
            }
            for &r in &root[..i] {
                node_off[r] = true;
            }
            if let Some(spur_path) = dijkstra(g, spur, t, &link_off, &node_off) {
                let root_path = prev.prefix(g, i);
                let total = root_path.concat(&spur_path);
                let key = (total.length_km(), total.nodes().to_vec());
                if !accepted.iter().any(|p| p.nodes() == key.1.as_slice()) {
                    candidates.insert(key);
                }
            }
            link_off.iter_mut().for_each(|x| *x = false);
            node_off.iter_mut().for_each(|x| *x = false);
        }
        let Some((_, nodes)) = candidates.pop_first() else {
            break;
        };
        accepted.push(Path::from_nodes(g, &nodes).expect("candidate follows links"));
    }
    accepted
}

/// Repeated shortest paths, each found with the links of all earlier ones
/// disabled, until none remains.
pub fn link_disjoint_paths(g: &EonGraph, s: NodeId, t: NodeId) -> Vec<Path> {
    let mut link_off = vec![false; g.link_count()];
    let node_off = vec![false; g.node_count()];
    let mut out = Vec::new();
    while let Some(p) = dijkstra(g, s, t, &link_off, &node_off) {
        if p.is_empty() {
            break;
        }
        for &e in p.links() {
            link_off[e] = true;
        }
        out.push(p);
    }
    out
}
