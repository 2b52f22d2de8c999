use std::fmt;

use crate::topology::{EonGraph, LinkId, NodeId};

/// A walk through the graph given by its nodes and the links between them.
/// A single node with no links is the empty path at that node.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    links: Vec<LinkId>,
    length_km: u64,
}

impl Path {
    pub fn empty(at: NodeId) -> Self {
        Path {
            nodes: vec![at],
            links: Vec::new(),
            length_km: 0,
        }
    }

    /// Builds a path from consecutive adjacent nodes; `None` if any hop has no link.
    pub fn from_nodes(g: &EonGraph, nodes: &[NodeId]) -> Option<Self> {
        let first = *nodes.first()?;
        let mut p = Path::empty(first);
        for &n in &nodes[1..] {
            let e = g.link_between(p.target(), n)?;
            p.push(g, e);
        }
        Some(p)
    }

    /// Extends the path over link `e`, which must touch the current target.
    pub fn push(&mut self, g: &EonGraph, e: LinkId) {
        let link = g.link(e);
        let at = self.target();
        assert!(link.a == at || link.b == at, "link {e} does not touch node {at}");
        self.nodes.push(link.other(at));
        self.links.push(e);
        self.length_km += link.length_km;
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn length_km(&self) -> u64 {
        self.length_km
    }

    pub fn hops(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("path has at least one node")
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }

    pub fn position(&self, n: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&m| m == n)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = self.nodes.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Prefix ending at the node with index `i`.
    pub fn prefix(&self, g: &EonGraph, i: usize) -> Path {
        let links = self.links[..i].to_vec();
        let length_km = links.iter().map(|&e| g.link(e).length_km).sum();
        Path {
            nodes: self.nodes[..=i].to_vec(),
            links,
            length_km,
        }
    }

    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.nodes.reverse();
        p.links.reverse();
        p
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.target(), other.source(), "paths do not meet");
        let mut p = self.clone();
        p.nodes.extend_from_slice(&other.nodes[1..]);
        p.links.extend_from_slice(&other.links);
        p.length_km += other.length_km;
        p
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, links: Vec<LinkId>, length_km: u64) -> Self {
        debug_assert_eq!(nodes.len(), links.len() + 1);
        Path {
            nodes,
            links,
            length_km,
        }
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        write!(f, "Path({} | {} km)", nodes.join("-"), self.length_km)
    }
}
