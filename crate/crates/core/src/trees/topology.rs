//! Enumeration of unrooted binary leaf-labelled topologies.
//!
//! Topologies on `n` leaves are built by inserting leaves `4, 5, ..., n`
//! one at a time into an edge of the current tree, starting from the star
//! on `{1, 2, 3}`. Leaf `k` has `2k - 5` edges to choose from, so every
//! topology arises from exactly one choice vector and there are
//! `(2n - 5)!!` of them.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Edge, WeightedTree};

pub const DEFAULT_TOPOLOGY_CAP: usize = 8;

/// An unweighted unrooted binary tree. Leaf `l` is node `l - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    /// Builds the topology encoded by `choices`, where `choices[k - 4]` is
    /// the index of the edge that receives leaf `k`.
    pub(crate) fn from_insertions(n: usize, choices: &[usize]) -> Self {
        assert!(n >= 3 && choices.len() == n - 3);
        let centre = n;
        let mut edges = vec![(centre, 0), (centre, 1), (centre, 2)];
        for (mid, (offset, &c)) in (n + 1..).zip(choices.iter().enumerate()) {
            let leaf = 3 + offset;
            let (a, b) = edges[c];
            edges[c] = (a, mid);
            edges.push((mid, b));
            edges.push((mid, leaf));
        }
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Attaches weights, `weight(edge_index)`, to produce a tree.
    pub fn with_weights<S: Scalar>(&self, mut weight: impl FnMut(usize) -> S) -> WeightedTree<S> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Edge {
                a,
                b,
                weight: weight(k),
            })
            .collect();
        let leaves: Vec<_> = (1..=self.n).map(|l| (l, l - 1)).collect();
        WeightedTree::new(2 * self.n - 2, edges, &leaves, None)
            .expect("insertion always yields a binary tree")
    }

    pub fn unit_tree<S: Scalar>(&self) -> WeightedTree<S> {
        self.with_weights(|_| S::one())
    }
}

/// `(2n - 5)!!`, the number of unrooted binary topologies on `n` labelled
/// leaves. `None` for `n < 3` or when the count overflows `u128`.
pub fn topology_count(n: usize) -> Option<u128> {
    if n < 3 {
        return None;
    }
    (3..=n).try_fold(1u128, |acc, k| acc.checked_mul((2 * k - 5) as u128))
}

#[derive(Debug, Clone)]
pub struct TopologyIterator {
    n: usize,
    choices: Vec<usize>,
    done: bool,
}

impl Iterator for TopologyIterator {
    type Item = Topology;

    fn next(&mut self) -> Option<Topology> {
        if self.done {
            return None;
        }
        let item = Topology::from_insertions(self.n, &self.choices);
        // mixed-radix increment, last leaf fastest
        self.done = true;
        for pos in (0..self.choices.len()).rev() {
            let radix = 2 * (pos + 4) - 5;
            if self.choices[pos] + 1 < radix {
                self.choices[pos] += 1;
                self.done = false;
                break;
            }
            self.choices[pos] = 0;
        }
        Some(item)
    }
}

/// Every topology on `n` leaves, for `3 <= n <= DEFAULT_TOPOLOGY_CAP`.
pub fn enumerate_topologies(n: usize) -> Result<TopologyIterator> {
    enumerate_topologies_capped(n, DEFAULT_TOPOLOGY_CAP)
}

pub fn enumerate_topologies_capped(n: usize, cap: usize) -> Result<TopologyIterator> {
    if n < 3 || n > cap {
        return Err(Error::OutOfRange(format!("n = {n} must lie in 3..={cap}")));
    }
    Ok(TopologyIterator {
        n,
        choices: vec![0; n - 3],
        done: false,
    })
}
