//! Directed graphs over variable indices: the decoded structure type and
//! deterministic topological ordering.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A directed graph on `n` nodes stored as a dense 0/1 adjacency matrix.
///
/// Self-loops are rejected; cycles are allowed, since samplers can emit
/// cyclic candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    n: usize,
    adj: Vec<bool>,
}

impl Structure {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::empty(n);
        for &(from, to) in edges {
            s.set_edge(from, to, true)?;
        }
        Ok(s)
    }

    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut s = Self::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => s.set_edge(i, j, true)?,
                    other => {
                        return Err(Error::Parse(format!(
                            "adjacency entry ({i},{j}) = {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from * self.n + to]
    }

    pub fn set_edge(&mut self, from: usize, to: usize, present: bool) -> Result<()> {
        if from >= self.n || to >= self.n {
            return Err(Error::InvalidIndex {
                index: from.max(to),
                n: self.n,
            });
        }
        if from == to {
            return Err(Error::InvalidParameter(format!("self-loop on node {from}")));
        }
        self.adj[from * self.n + to] = present;
        Ok(())
    }

    /// Directed edges in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(j, node)).count()
    }

    pub fn parents(&self, node: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.has_edge(j, node)).collect()
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(node, j))
    }

    pub fn is_dag(&self) -> bool {
        matches!(topological_order(self), TopoOrder::Order(_))
    }

    /// Whether a directed path `from ⇝ to` exists (a node reaches itself).
    pub fn has_path(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for v in self.children(u) {
                if v == to {
                    return true;
                }
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j) as u8).collect())
            .collect()
    }
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_matrix().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(deserializer)?;
        Structure::from_matrix(&rows).map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`topological_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopoOrder {
    /// Every edge points forward in this order.
    Order(Vec<usize>),
    /// Nodes of a directed cycle, listed along the cycle.
    Cycle(Vec<usize>),
}

/// Kahn's algorithm, always releasing the smallest ready index first.
pub fn topological_order(graph: &Structure) -> TopoOrder {
    let n = graph.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| graph.in_degree(v)).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for v in graph.children(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() == n {
        return TopoOrder::Order(order);
    }

    // Every unreleased node keeps an unreleased parent, so walking parents
    // must revisit a node.
    let blocked: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let start = blocked.iter().position(|&b| b).expect("some node is blocked");
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while pos[cur] == usize::MAX {
        pos[cur] = walk.len();
        walk.push(cur);
        cur = (0..n)
            .find(|&p| blocked[p] && graph.has_edge(p, cur))
            .expect("blocked node has a blocked parent");
    }
    let mut cycle = walk[pos[cur]..].to_vec();
    // The walk followed parents; flip it to follow edges.
    cycle.reverse();
    TopoOrder::Cycle(cycle)
}
