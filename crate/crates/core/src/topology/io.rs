//! Line-oriented graph text format:
//!
//! ```text
//! nodes N slices W
//! node ID X Y
//! link U V LENGTH_KM
//! ```
//!
//! Blank lines and `#` comments are ignored. Spectrum occupancy is not stored.

use std::fmt::Write as _;

use super::{EonGraph, Point};
use crate::error::{Error, Result};

impl EonGraph {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nodes {} slices {}", self.node_count(), self.n_slices);
        for (i, p) in self.coords.iter().enumerate() {
            let _ = writeln!(s, "node {i} {} {}", p.x, p.y);
        }
        for l in &self.links {
            let _ = writeln!(s, "link {} {} {}", l.a, l.b, l.length_km);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<EonGraph> {
        let mut graph: Option<EonGraph> = None;
        let mut placed = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| Error::GraphFormat { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tok: Vec<&str> = content.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                tok.get(i)
                    .ok_or_else(|| err(format!("missing field {i}")))?
                    .parse()
                    .map_err(|e| err(format!("bad integer {:?}: {e}", tok[i])))
            };
            match tok[0] {
                "nodes" => {
                    if graph.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    if tok.len() != 4 || tok[2] != "slices" {
                        return Err(err("expected `nodes N slices W`".into()));
                    }
                    let (n, w) = (num(1)?, num(3)?);
                    if w == 0 {
                        return Err(err("slice count must be positive".into()));
                    }
                    graph = Some(EonGraph::with_nodes(n, w));
                    placed = vec![false; n];
                }
                "node" => {
                    let g = graph.as_mut().ok_or_else(|| err("node before header".into()))?;
                    if tok.len() != 4 {
                        return Err(err("expected `node ID X Y`".into()));
                    }
                    let id = num(1)?;
                    let coord = |i: usize| -> Result<f64> {
                        tok[i].parse().map_err(|e| err(format!("bad coordinate {:?}: {e}", tok[i])))
                    };
                    if id >= g.node_count() {
                        return Err(err(format!("node id {id} out of range")));
                    }
                    g.coords[id] = Point::new(coord(2)?, coord(3)?);
                    placed[id] = true;
                }
                "link" => {
                    let g = graph.as_mut().ok_or_else(|| err("link before header".into()))?;
                    if tok.len() != 4 {
                        return Err(err("expected `link U V LENGTH`".into()));
                    }
                    let (a, b, len) = (num(1)?, num(2)?, num(3)?);
                    let n = g.node_count();
                    if a >= n || b >= n || a == b {
                        return Err(err(format!("invalid endpoints {a} {b}")));
                    }
                    if len == 0 {
                        return Err(err("link length must be at least 1".into()));
                    }
                    if g.link_between(a, b).is_some() {
                        return Err(err(format!("parallel link {a}-{b}")));
                    }
                    g.add_link(a, b, len as u64);
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        let g = graph.ok_or(Error::GraphFormat {
            line: 0,
            msg: "missing `nodes` header".into(),
        })?;
        if let Some(missing) = placed.iter().position(|p| !p) {
            return Err(Error::GraphFormat {
                line: 0,
                msg: format!("node {missing} has no coordinates"),
            });
        }
        Ok(g)
    }
}
