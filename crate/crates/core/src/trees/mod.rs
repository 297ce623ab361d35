//! Weighted leaf-labelled trees.
//!
//! A [`WeightedTree`] has nodes `0..node_count`, leaves carrying the labels
//! `1..=n` (one each), and non-negative edge weights. Leaves always have
//! degree one; internal nodes are unlabelled and have degree at least two.

mod alpha;
mod contract;
mod equidistant;
mod newick;
mod random;
mod reconstruct;
mod topology;

pub use alpha::{well_number, AlphaLabel, WellNumbering};
pub use contract::{contract_subtree, Contraction};
pub use equidistant::{build_equidistant, node_heights};
pub use newick::{parse_newick, serialize_newick};
pub use random::{random_tree, Shape, WeightSampler};
pub use reconstruct::reconstruct_tree;
pub use topology::{
    enumerate_topologies, enumerate_topologies_capped, topology_count, Topology, TopologyIterator,
    DEFAULT_TOPOLOGY_CAP,
};

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::normalize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<S> {
    pub a: usize,
    pub b: usize,
    pub weight: S,
}

#[derive(Debug, Clone)]
pub struct WeightedTree<S> {
    edges: Vec<Edge<S>>,
    adj: Vec<Vec<(usize, usize)>>,
    leaf_node: Vec<usize>,
    node_label: Vec<Option<usize>>,
    root: Option<usize>,
}

impl<S: Scalar> WeightedTree<S> {
    /// Validates and assembles a tree.
    ///
    /// `leaves` maps each label in `1..=n` to its node. Fails if the graph is
    /// not a tree, a label is missing or repeated, a weight is negative, a
    /// labelled node is not a leaf, or an unlabelled node is a leaf.
    pub fn new(
        node_count: usize,
        edges: Vec<Edge<S>>,
        leaves: &[(usize, usize)],
        root: Option<usize>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        if node_count < 2 {
            return bad("a tree needs at least two nodes".into());
        }
        if edges.len() + 1 != node_count {
            return bad(format!(
                "{} nodes need {} edges, got {}",
                node_count,
                node_count - 1,
                edges.len()
            ));
        }
        let mut adj = vec![Vec::new(); node_count];
        for (idx, e) in edges.iter().enumerate() {
            if e.a >= node_count || e.b >= node_count || e.a == e.b {
                return bad(format!("edge {idx} ({}, {}) is not valid", e.a, e.b));
            }
            if e.weight.is_negative() {
                return bad(format!("edge {idx} has negative weight {}", e.weight));
            }
            adj[e.a].push((e.b, idx));
            adj[e.b].push((e.a, idx));
        }
        // connected + (node_count - 1) edges => acyclic
        let mut seen = vec![false; node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("graph is not connected".into());
        }

        let n = leaves.len();
        if n < 2 {
            return bad("a tree needs at least two labelled leaves".into());
        }
        let mut leaf_node = vec![usize::MAX; n];
        let mut node_label = vec![None; node_count];
        for &(label, node) in leaves {
            if !(1..=n).contains(&label) {
                return bad(format!("leaf label {label} outside 1..={n}"));
            }
            if node >= node_count {
                return bad(format!("leaf {label} refers to missing node {node}"));
            }
            if leaf_node[label - 1] != usize::MAX {
                return bad(format!("duplicate leaf label {label}"));
            }
            if node_label[node].is_some() {
                return bad(format!("node {node} carries two labels"));
            }
            leaf_node[label - 1] = node;
            node_label[node] = Some(label);
        }
        for (u, nbrs) in adj.iter().enumerate() {
            match (node_label[u], nbrs.len()) {
                (Some(l), d) if d != 1 => return bad(format!("leaf {l} has degree {d}")),
                (None, d) if d < 2 => return bad(format!("unlabelled node {u} is a leaf")),
                _ => {}
            }
        }
        if let Some(r) = root {
            if r >= node_count {
                return bad(format!("root {r} is not a node"));
            }
        }
        Ok(Self {
            edges,
            adj,
            leaf_node,
            node_label,
            root,
        })
    }

    /// Number of leaves.
    pub fn n(&self) -> usize {
        self.leaf_node.len()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    /// `(neighbour, edge index)` pairs of `node`.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adj[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn leaf_node(&self, label: usize) -> usize {
        self.leaf_node[label - 1]
    }

    pub fn label_of(&self, node: usize) -> Option<usize> {
        self.node_label[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.node_label[node].is_some()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(mut self, root: Option<usize>) -> Result<Self> {
        if let Some(r) = root {
            if r >= self.node_count() {
                return Err(Error::InvalidTree(format!("root {r} is not a node")));
            }
        }
        self.root = root;
        Ok(self)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_positive())
    }

    pub fn has_degree_two_vertices(&self) -> bool {
        self.adj.iter().any(|a| a.len() == 2)
    }

    pub fn total_weight(&self) -> S {
        self.edges.iter().fold(S::zero(), |mut acc, e| {
            acc += &e.weight;
            acc
        })
    }

    /// BFS from `start`: `(parent, parent edge)` per node, `None` at `start`.
    pub fn parents_from(&self, start: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Children lists when the tree hangs from `root`.
    pub fn children_from(&self, root: usize) -> Vec<Vec<usize>> {
        let parent = self.parents_from(root);
        let mut children = vec![Vec::new(); self.node_count()];
        // keep adjacency order for determinism
        for (u, kids) in children.iter_mut().enumerate() {
            for &(v, _) in &self.adj[u] {
                if parent[v].is_some_and(|(p, _)| p == u) {
                    kids.push(v);
                }
            }
        }
        children
    }

    /// Path lengths from `start` to every node.
    pub fn distances_from(&self, start: usize) -> Vec<S> {
        let mut dist = vec![S::zero(); self.node_count()];
        let mut stack = vec![(start, usize::MAX)];
        while let Some((u, from)) = stack.pop() {
            for &(v, e) in &self.adj[u] {
                if v != from {
                    dist[v] = dist[u].clone() + self.edges[e].weight.clone();
                    stack.push((v, u));
                }
            }
        }
        dist
    }

    /// `D(i, j)`: the weight of the unique path between leaves `i` and `j`.
    pub fn distance_matrix(&self) -> DistanceMatrix<S> {
        let n = self.n();
        let mut d = DistanceMatrix::zeros(n);
        for i in 1..n {
            let dist = self.distances_from(self.leaf_node(i));
            for j in i + 1..=n {
                d.set(i, j, dist[self.leaf_node(j)].clone());
            }
        }
        d
    }

    /// Weight of the smallest subtree containing the leaves in `labels`,
    /// computed as the total weight of the union of the leaf-to-leaf paths.
    pub fn steiner_weight(&self, labels: &[usize]) -> Result<S> {
        let v = normalize(labels, self.n()).ok_or_else(|| {
            Error::OutOfRange(format!(
                "{labels:?} is not a set of leaves of a {}-leaf tree",
                self.n()
            ))
        })?;
        if v.len() < 2 {
            return Err(Error::OutOfRange(
                "steiner weight needs at least two leaves".into(),
            ));
        }
        let mut used = vec![false; self.edges.len()];
        let parent = self.parents_from(self.leaf_node(v[0]));
        for &label in &v[1..] {
            let mut u = self.leaf_node(label);
            while let Some((p, e)) = parent[u] {
                if used[e] {
                    break;
                }
                used[e] = true;
                u = p;
            }
        }
        Ok(self
            .edges
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .fold(S::zero(), |mut acc, (e, _)| {
                acc += &e.weight;
                acc
            }))
    }

    /// The same tree with zero-weight internal edges contracted, unlabelled
    /// degree-two vertices suppressed, and no root.
    pub fn simplified(&self) -> Self {
        let nc = self.node_count();
        // union-find over zero-weight edges between internal nodes
        let mut uf: Vec<usize> = (0..nc).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            let mut y = x;
            while uf[y] != r {
                let next = uf[y];
                uf[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            if e.weight.is_zero() && !self.is_leaf(e.a) && !self.is_leaf(e.b) {
                let (ra, rb) = (find(&mut uf, e.a), find(&mut uf, e.b));
                uf[ra] = rb;
            }
        }
        // adjacency as (neighbour, weight) maps on class representatives
        let mut nbrs: Vec<Vec<(usize, S)>> = vec![Vec::new(); nc];
        for e in &self.edges {
            let (ra, rb) = (find(&mut uf, e.a), find(&mut uf, e.b));
            if ra != rb {
                nbrs[ra].push((rb, e.weight.clone()));
                nbrs[rb].push((ra, e.weight.clone()));
            }
        }
        let mut alive: Vec<bool> = (0..nc).map(|u| find(&mut uf, u) == u).collect();
        while let Some(u) = (0..nc).find(|&u| alive[u] && !self.is_leaf(u) && nbrs[u].len() == 2) {
            let (a, wa) = nbrs[u][0].clone();
            let (b, wb) = nbrs[u][1].clone();
            nbrs[a].retain(|(x, _)| *x != u);
            nbrs[b].retain(|(x, _)| *x != u);
            let w = wa + wb;
            nbrs[a].push((b, w.clone()));
            nbrs[b].push((a, w));
            nbrs[u].clear();
            alive[u] = false;
        }
        let ids: Vec<usize> = (0..nc).filter(|&u| alive[u]).collect();
        let mut index = vec![usize::MAX; nc];
        for (k, &u) in ids.iter().enumerate() {
            index[u] = k;
        }
        let mut edges = Vec::new();
        for &u in &ids {
            for (v, w) in &nbrs[u] {
                if u < *v {
                    edges.push(Edge {
                        a: index[u],
                        b: index[*v],
                        weight: w.clone(),
                    });
                }
            }
        }
        let leaves: Vec<(usize, usize)> = (1..=self.n())
            .map(|l| (l, index[self.leaf_node(l)]))
            .collect();
        Self::new(ids.len(), edges, &leaves, None).expect("simplification preserves tree structure")
    }

    /// A string that is equal for two trees exactly when they are isomorphic
    /// as leaf-labelled weighted trees (after [`simplified`](Self::simplified)).
    pub fn canonical_form(&self) -> String {
        let t = self.simplified();
        let leaf1 = t.leaf_node(1);
        let (nbr, e) = t.adj[leaf1][0];
        format!("1:{}>{}", t.edges[e].weight, t.canonical_below(nbr, leaf1))
    }

    fn canonical_below(&self, u: usize, from: usize) -> String {
        if let Some(l) = self.node_label[u] {
            return l.to_string();
        }
        let mut parts: Vec<String> = self.adj[u]
            .iter()
            .filter(|(v, _)| *v != from)
            .map(|&(v, e)| format!("{}:{}", self.canonical_below(v, u), self.edges[e].weight))
            .collect();
        parts.sort();
        format!("({})", parts.join(","))
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.n() == other.n() && self.canonical_form() == other.canonical_form()
    }

    /// Same shape with every weight replaced by `f(weight)`.
    pub fn map_weights(&self, mut f: impl FnMut(&S) -> S) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                a: e.a,
                b: e.b,
                weight: f(&e.weight),
            })
            .collect();
        let leaves: Vec<_> = (1..=self.n()).map(|l| (l, self.leaf_node(l))).collect();
        Self::new(self.node_count(), edges, &leaves, self.root)
    }

    /// Renames leaf `l` to `perm[l - 1]`.
    pub fn relabel_leaves(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::OutOfRange(
                "permutation length differs from n".into(),
            ));
        }
        let leaves: Vec<_> = (1..=self.n())
            .map(|l| (perm[l - 1], self.leaf_node(l)))
            .collect();
        Self::new(self.node_count(), self.edges.clone(), &leaves, self.root)
    }
}
