use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of parents per node supported by the encoding.
pub const MAX_PARENTS: usize = 2;
/// Slack bits per node, `ceil(log2(m + 1))` for `m = 2`.
pub const SLACK_BITS: usize = 2;

/// Role of one QUBO variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// Edge indicator `from → to`.
    Edge { from: usize, to: usize },
    /// Slack bit `bit` of node `node`'s in-degree slack, weight `2^bit`.
    Slack { node: usize, bit: usize },
    /// Order bit, set when `first` precedes `second` (`first < second`).
    Order { first: usize, second: usize },
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Role::Edge { from, to } => write!(f, "d {from} {to}"),
            Role::Slack { node, bit } => write!(f, "y {node} {bit}"),
            Role::Order { first, second } => write!(f, "r {first} {second}"),
        }
    }
}

/// Layout of the QUBO variables: all edge bits, then all slack bits, then all
/// order bits, each block in lexicographic order of its indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableIndexMap {
    n: usize,
}

impl VariableIndexMap {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVariables(n));
        }
        Ok(Self { n })
    }

    /// Recovers the layout from a QUBO dimension, if one matches.
    pub fn from_dim(dim: usize) -> Option<Self> {
        (3..=dim).map(|n| Self { n }).find(|m| m.total() == dim)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        MAX_PARENTS
    }

    pub fn mu(&self) -> usize {
        SLACK_BITS
    }

    pub fn edge_count(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn slack_count(&self) -> usize {
        self.n * SLACK_BITS
    }

    pub fn order_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn total(&self) -> usize {
        self.edge_count() + self.slack_count() + self.order_count()
    }

    #[inline]
    pub fn edge(&self, from: usize, to: usize) -> usize {
        debug_assert!(from != to && from < self.n && to < self.n);
        from * (self.n - 1) + if to < from { to } else { to - 1 }
    }

    #[inline]
    pub fn slack(&self, node: usize, bit: usize) -> usize {
        debug_assert!(node < self.n && bit < SLACK_BITS);
        self.edge_count() + node * SLACK_BITS + bit
    }

    #[inline]
    pub fn order(&self, first: usize, second: usize) -> usize {
        debug_assert!(first < second && second < self.n);
        let n = self.n;
        self.edge_count() + self.slack_count() + first * n - first * (first + 1) / 2 + (second - first - 1)
    }

    pub fn role(&self, index: usize) -> Option<Role> {
        let n = self.n;
        if index < self.edge_count() {
            let from = index / (n - 1);
            let rest = index % (n - 1);
            let to = if rest < from { rest } else { rest + 1 };
            return Some(Role::Edge { from, to });
        }
        let index = index - self.edge_count();
        if index < self.slack_count() {
            return Some(Role::Slack {
                node: index / SLACK_BITS,
                bit: index % SLACK_BITS,
            });
        }
        let mut index = index - self.slack_count();
        if index >= self.order_count() {
            return None;
        }
        for first in 0..n - 1 {
            let row = n - 1 - first;
            if index < row {
                return Some(Role::Order {
                    first,
                    second: first + 1 + index,
                });
            }
            index -= row;
        }
        None
    }

    pub fn roles(&self) -> impl Iterator<Item = Role> + '_ {
        (0..self.total()).map(|i| self.role(i).expect("index within total"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for (n, dim) in [(3, 15), (4, 26), (5, 40), (9, 126), (15, 345)] {
            assert_eq!(VariableIndexMap::new(n).unwrap().total(), dim);
            assert_eq!(VariableIndexMap::from_dim(dim).unwrap().n(), n);
        }
        assert!(VariableIndexMap::new(2).is_err());
        assert!(VariableIndexMap::from_dim(16).is_none());
    }

    #[test]
    fn roles_are_a_bijection_in_block_order() {
        for n in 3..8 {
            let map = VariableIndexMap::new(n).unwrap();
            let mut expected = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        expected.push(Role::Edge { from: i, to: j });
                    }
                }
            }
            for i in 0..n {
                for l in 0..SLACK_BITS {
                    expected.push(Role::Slack { node: i, bit: l });
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    expected.push(Role::Order { first: i, second: j });
                }
            }
            let roles: Vec<Role> = map.roles().collect();
            assert_eq!(roles, expected);
            for (idx, role) in roles.iter().enumerate() {
                let back = match *role {
                    Role::Edge { from, to } => map.edge(from, to),
                    Role::Slack { node, bit } => map.slack(node, bit),
                    Role::Order { first, second } => map.order(first, second),
                };
                assert_eq!(back, idx);
            }
            assert!(map.role(map.total()).is_none());
        }
    }
}
