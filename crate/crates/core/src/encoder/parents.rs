use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A candidate parent set of size at most two, members ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParentSet {
    Empty,
    One(usize),
    Two(usize, usize),
}

impl ParentSet {
    pub fn pair(a: usize, b: usize) -> Self {
        if a < b {
            ParentSet::Two(a, b)
        } else {
            ParentSet::Two(b, a)
        }
    }

    pub fn members(&self) -> Vec<usize> {
        match *self {
            ParentSet::Empty => vec![],
            ParentSet::One(a) => vec![a],
            ParentSet::Two(a, b) => vec![a, b],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ParentSet::Empty => 0,
            ParentSet::One(_) => 1,
            ParentSet::Two(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ParentSet::Empty)
    }

    pub fn contains(&self, v: usize) -> bool {
        match *self {
            ParentSet::Empty => false,
            ParentSet::One(a) => a == v,
            ParentSet::Two(a, b) => a == v || b == v,
        }
    }
}

/// All parent sets of size ≤ 2 for `node` among `n` variables: the empty
/// set, then singletons, then pairs, each ascending.
pub fn enumerate_parent_sets(n: usize, node: usize) -> Result<Vec<ParentSet>> {
    if n < 3 {
        return Err(Error::TooFewVariables(n));
    }
    if node >= n {
        return Err(Error::InvalidIndex { index: node, n });
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != node).collect();
    let mut sets = Vec::with_capacity(1 + others.len() + others.len() * (others.len() - 1) / 2);
    sets.push(ParentSet::Empty);
    sets.extend(others.iter().map(|&j| ParentSet::One(j)));
    for (a, &j) in others.iter().enumerate() {
        for &k in &others[a + 1..] {
            sets.push(ParentSet::Two(j, k));
        }
    }
    Ok(sets)
}
