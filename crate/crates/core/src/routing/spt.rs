//! Spectrum-constrained shortest-path tree.
//!
//! A label-setting search in which every label carries the set of slices
//! still free on every link of its walk. Plain Dijkstra keeps one label per
//! node and so can discard a longer walk whose slices are the only ones able
//! to carry a demand; here a node keeps every label that no other label
//! dominates (shorter or equal *and* a superset of slices).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use super::Path;
use crate::spectrum::{select_slot, supports, Policy, SliceSet, Slot};
use crate::topology::{EonGraph, LinkId, NodeId};

/// Whether extracted paths run away from the root or toward it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Reverse,
}

#[derive(Clone, Debug)]
pub struct Label {
    pub node: NodeId,
    pub cost_km: u64,
    /// Slices free on every link walked so far that lie in a run of at least
    /// the searched width.
    pub aset: SliceSet,
    parent: Option<(usize, LinkId)>,
}

impl Label {
    pub fn dominates(&self, other: &Label) -> bool {
        self.cost_km <= other.cost_km && self.aset.is_superset(&other.aset)
    }
}

#[derive(Clone, Debug)]
pub struct SpTree {
    root: NodeId,
    orientation: Orientation,
    labels: Vec<Label>,
    permanent: Vec<Vec<usize>>,
}

/// Parameters of one tree search.
#[derive(Clone, Debug)]
pub struct SptSearch<'a> {
    pub root: NodeId,
    /// The search halts once each of these has a permanent label.
    pub stop_nodes: &'a [NodeId],
    pub width: usize,
    pub universe: &'a SliceSet,
    pub cap_km: u64,
    /// Upper bound on permanent labels; `None` for unbounded.
    pub label_cap: Option<usize>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    cost: Reverse<u64>,
    aset_len: usize,
    node: Reverse<NodeId>,
    idx: Reverse<usize>,
}

impl SptSearch<'_> {
    pub fn run(&self, g: &EonGraph) -> SpTree {
        assert!(self.width >= 1, "width must be positive");
        let n = g.node_count();
        let mut tree = SpTree {
            root: self.root,
            orientation: Orientation::Forward,
            labels: Vec::new(),
            permanent: vec![Vec::new(); n],
        };

        let mut aset = self.universe.clone();
        aset.retain_runs_at_least(self.width);
        if aset.is_empty() {
            return tree;
        }

        let mut is_stop = vec![false; n];
        let mut remaining = 0usize;
        for &s in self.stop_nodes {
            if !is_stop[s] {
                is_stop[s] = true;
                remaining += 1;
            }
        }

        let mut heap = BinaryHeap::new();
        tree.labels.push(Label {
            node: self.root,
            cost_km: 0,
            aset,
            parent: None,
        });
        heap.push(entry(&tree.labels, 0));
        let mut settled = 0usize;

        while let Some(Entry { idx: Reverse(idx), .. }) = heap.pop() {
            let u = tree.labels[idx].node;
            if tree.permanent[u]
                .iter()
                .any(|&p| tree.labels[p].dominates(&tree.labels[idx]))
            {
                continue;
            }
            tree.permanent[u].push(idx);
            settled += 1;
            if is_stop[u] && tree.permanent[u].len() == 1 {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            if self.label_cap.is_some_and(|cap| settled >= cap) {
                break;
            }

            for &(v, e) in g.neighbors(u) {
                let link = g.link(e);
                let cost = tree.labels[idx].cost_km + link.length_km;
                if cost > self.cap_km || tree.on_chain(idx, v) {
                    continue;
                }
                let mut aset = tree.labels[idx].aset.intersection(link.available());
                aset.retain_runs_at_least(self.width);
                if aset.is_empty() {
                    continue;
                }
                let cand = Label {
                    node: v,
                    cost_km: cost,
                    aset,
                    parent: Some((idx, e)),
                };
                if tree.permanent[v]
                    .iter()
                    .any(|&p| tree.labels[p].dominates(&cand))
                {
                    continue;
                }
                tree.labels.push(cand);
                heap.push(entry(&tree.labels, tree.labels.len() - 1));
            }
        }
        tree
    }
}

fn entry(labels: &[Label], idx: usize) -> Entry {
    let l = &labels[idx];
    Entry {
        cost: Reverse(l.cost_km),
        aset_len: l.aset.len(),
        node: Reverse(l.node),
        idx: Reverse(idx),
    }
}

/// Grows a tree from `root` until every node of `stop_nodes` has a label or
/// the frontier empties.
pub fn constrained_spt(
    g: &EonGraph,
    root: NodeId,
    stop_nodes: &[NodeId],
    width: usize,
    universe: &SliceSet,
    cap_km: u64,
) -> SpTree {
    SptSearch {
        root,
        stop_nodes,
        width,
        universe,
        cap_km,
        label_cap: None,
    }
    .run(g)
}

impl SpTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The same tree with extracted paths leading toward the root. On an
    /// undirected graph the links are unchanged.
    pub fn reversed(mut self) -> SpTree {
        self.orientation = match self.orientation {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        };
        self
    }

    /// Permanent labels at `n` in the order they were settled (cost ascending).
    pub fn labels_at(&self, n: NodeId) -> impl Iterator<Item = &Label> + '_ {
        self.permanent[n].iter().map(move |&i| &self.labels[i])
    }

    pub fn parent(&self, label: &Label) -> Option<&Label> {
        label.parent.map(|(p, _)| &self.labels[p])
    }

    fn on_chain(&self, mut idx: usize, node: NodeId) -> bool {
        loop {
            let l = &self.labels[idx];
            if l.node == node {
                return true;
            }
            match l.parent {
                Some((p, _)) => idx = p,
                None => return false,
            }
        }
    }

    /// The walk of a label, oriented per the tree.
    pub fn path_of(&self, label: &Label) -> Path {
        let mut nodes = vec![label.node];
        let mut links = Vec::new();
        let mut cur = label;
        while let Some((p, e)) = cur.parent {
            links.push(e);
            cur = &self.labels[p];
            nodes.push(cur.node);
        }
        // nodes now run from the label's node back to the root.
        if self.orientation == Orientation::Forward {
            nodes.reverse();
            links.reverse();
        }
        Path::from_parts(nodes, links, label.cost_km)
    }

    /// Cheapest path between `n` and the root on which every slice of `slices`
    /// is free.
    pub fn extract_exact(&self, n: NodeId, slices: &SliceSet) -> Option<Path> {
        self.labels_at(n)
            .find(|l| l.aset.is_superset(slices))
            .map(|l| self.path_of(l))
    }

    /// Cheapest path between `n` and the root able to carry `width` slices,
    /// with a slot chosen by `policy`.
    pub fn extract_any<R: Rng + ?Sized>(
        &self,
        n: NodeId,
        width: usize,
        policy: Policy,
        rng: &mut R,
    ) -> Option<(Path, Slot)> {
        let label = self.labels_at(n).find(|l| supports(&l.aset, width))?;
        let slot = select_slot(&label.aset, width, policy, rng)?;
        Some((self.path_of(label), slot))
    }
}
