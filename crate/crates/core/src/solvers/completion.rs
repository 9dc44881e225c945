//! Completing an edge assignment with the cheapest slack and order bits.

use crate::encoder::{VariableIndexMap, MAX_PARENTS, SLACK_BITS};
use crate::error::{Error, Result};
use crate::graph::{topological_order, Structure, TopoOrder};

/// Reads the edge block of `x` into a graph; slack and order bits are ignored.
pub fn decode_solution(x: &[u8], index: &VariableIndexMap) -> Result<Structure> {
    if x.len() != index.total() {
        return Err(Error::LengthMismatch {
            expected: index.total(),
            actual: x.len(),
        });
    }
    Ok(structure_from_edge_bits(&x[..index.edge_count()], index))
}

pub(crate) fn structure_from_edge_bits(d: &[u8], index: &VariableIndexMap) -> Structure {
    let n = index.n();
    let mut g = Structure::empty(n);
    for from in 0..n {
        for to in (0..n).filter(|&t| t != from) {
            if d[index.edge(from, to)] != 0 {
                g.set_edge(from, to, true).expect("indices in range");
            }
        }
    }
    g
}

/// Edge block for a graph, in index-map order.
pub fn edge_bits(graph: &Structure, index: &VariableIndexMap) -> Result<Vec<u8>> {
    if graph.n() != index.n() {
        return Err(Error::LengthMismatch {
            expected: index.n(),
            actual: graph.n(),
        });
    }
    let mut d = vec![0u8; index.edge_count()];
    for (from, to) in graph.edges() {
        d[index.edge(from, to)] = 1;
    }
    Ok(d)
}

/// Full assignment for the edge bits `d`.
///
/// Each node's slack is `max(0, m − in-degree)`. For an acyclic graph the
/// order bits come from a total order extending it, so neither constraint
/// term is charged. For a cyclic graph the order is the reverse DFS finish
/// order; some cycle penalty is then unavoidable.
pub fn complete_assignment(d: &[u8], index: &VariableIndexMap) -> Result<Vec<u8>> {
    if d.len() != index.edge_count() {
        return Err(Error::LengthMismatch {
            expected: index.edge_count(),
            actual: d.len(),
        });
    }
    let graph = structure_from_edge_bits(d, index);
    let mut x = vec![0u8; index.total()];
    x[..d.len()].copy_from_slice(d);
    fill_completion(&graph, index, &mut x);
    Ok(x)
}

pub(crate) fn fill_completion(graph: &Structure, index: &VariableIndexMap, x: &mut [u8]) {
    let n = index.n();
    for node in 0..n {
        let slack = MAX_PARENTS.saturating_sub(graph.in_degree(node));
        for bit in 0..SLACK_BITS {
            x[index.slack(node, bit)] = ((slack >> bit) & 1) as u8;
        }
    }

    let order = match topological_order(graph) {
        TopoOrder::Order(_) => {
            let mut total = graph.clone();
            for i in 0..n {
                for j in i + 1..n {
                    if total.has_edge(i, j) || total.has_edge(j, i) {
                        continue;
                    }
                    let (from, to) = if total.has_path(j, i) { (j, i) } else { (i, j) };
                    total.set_edge(from, to, true).expect("distinct nodes");
                }
            }
            match topological_order(&total) {
                TopoOrder::Order(order) => order,
                TopoOrder::Cycle(_) => unreachable!("completion only adds acyclic edges"),
            }
        }
        TopoOrder::Cycle(_) => reverse_finish_order(graph),
    };
    let mut position = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    for i in 0..n {
        for j in i + 1..n {
            x[index.order(i, j)] = (position[i] < position[j]) as u8;
        }
    }
}

/// Depth-first search from roots in index order, children ascending; returns
/// nodes by decreasing finish time.
fn reverse_finish_order(graph: &Structure) -> Vec<usize> {
    let n = graph.n();
    let mut visited = vec![false; n];
    let mut finished = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        // (node, next child to try)
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            match (*next..n).find(|&v| graph.has_edge(u, v) && !visited[v]) {
                Some(v) => {
                    *next = v + 1;
                    visited[v] = true;
                    stack.push((v, 0));
                }
                None => {
                    finished.push(u);
                    stack.pop();
                }
            }
        }
    }
    finished.reverse();
    finished
}
