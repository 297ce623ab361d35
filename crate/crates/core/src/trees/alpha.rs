//! Well-numbering of leaves via positional labels.
//!
//! Hanging the tree from a root, each node receives a finite sequence of
//! positive integers: the root gets the empty sequence, and the `i`-th child
//! of a node labelled `(a1, ..., as)` gets `(a1, ..., as, i)`. Sequences are
//! compared lexicographically with implicit trailing zeros, which for
//! zero-free sequences is exactly the derived `Ord` on `Vec`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::WeightedTree;

/// A node's position label; trailing zeros are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlphaLabel(pub Vec<u32>);

impl AlphaLabel {
    /// Number of non-zero entries, which equals the node's depth.
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Whether `self` is a proper prefix of `other`.
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

impl Ord for AlphaLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        // first differing entry decides; a missing entry reads as 0
        let len = self.0.len().max(other.0.len());
        for k in 0..len {
            let a = self.0.get(k).copied().unwrap_or(0);
            let b = other.0.get(k).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for AlphaLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AlphaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for a in &self.0 {
            write!(f, "{a},")?;
        }
        write!(f, "0,...)")
    }
}

#[derive(Debug, Clone)]
pub struct WellNumbering {
    pub root: usize,
    /// Label of every node, indexed by node id.
    pub alpha: Vec<AlphaLabel>,
    /// Parent of every node in the rooted tree.
    pub parent: Vec<Option<usize>>,
    /// Leaf labels sorted by their alpha labels.
    pub order: Vec<usize>,
    /// `relabel[l - 1]` is the new number of leaf `l`; under it the leaves
    /// are well-numbered.
    pub relabel: Vec<usize>,
}

impl WellNumbering {
    pub fn is_ancestor(&self, anc: usize, node: usize) -> bool {
        let mut u = node;
        while let Some(p) = self.parent[u] {
            if p == anc {
                return true;
            }
            u = p;
        }
        false
    }
}

/// Labels the nodes of `tree` hung from `root`. Children are numbered in
/// order of their smallest descendant leaf label.
pub fn well_number<S: Scalar>(tree: &WeightedTree<S>, root: usize) -> Result<WellNumbering> {
    if root >= tree.node_count() {
        return Err(Error::OutOfRange(format!("root {root} is not a node")));
    }
    let parents = tree.parents_from(root);
    let children = tree.children_from(root);

    // smallest leaf label below each node, bottom-up over a DFS preorder
    let mut preorder = Vec::with_capacity(tree.node_count());
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        preorder.push(u);
        stack.extend(children[u].iter().copied());
    }
    let mut min_leaf: Vec<usize> = (0..tree.node_count())
        .map(|u| tree.label_of(u).unwrap_or(usize::MAX))
        .collect();
    for &u in preorder.iter().rev() {
        if let Some((p, _)) = parents[u] {
            min_leaf[p] = min_leaf[p].min(min_leaf[u]);
        }
    }

    let mut alpha = vec![AlphaLabel::default(); tree.node_count()];
    for &u in &preorder {
        let mut kids = children[u].clone();
        kids.sort_by_key(|&v| min_leaf[v]);
        for (i, v) in kids.into_iter().enumerate() {
            let mut label = alpha[u].0.clone();
            label.push(i as u32 + 1);
            alpha[v] = AlphaLabel(label);
        }
    }

    let mut order: Vec<usize> = (1..=tree.n()).collect();
    order.sort_by(|&a, &b| alpha[tree.leaf_node(a)].cmp(&alpha[tree.leaf_node(b)]));
    let mut relabel = vec![0; tree.n()];
    for (pos, &label) in order.iter().enumerate() {
        relabel[label - 1] = pos + 1;
    }
    Ok(WellNumbering {
        root,
        alpha,
        parent: parents.iter().map(|p| p.map(|(u, _)| u)).collect(),
        order,
        relabel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::parse_newick;
    use crate::Rational;

    fn six_leaf() -> WeightedTree<Rational> {
        parse_newick("(((6:1,2:1):1,4:2):1,(1:1,(3:1,5:1):1):2);").unwrap()
    }

    #[test]
    fn root_is_all_zero_and_depth_counts_entries() {
        let t = six_leaf();
        let root = t.root().unwrap();
        let w = well_number(&t, root).unwrap();
        assert_eq!(w.alpha[root], AlphaLabel(vec![]));
        assert_eq!(w.alpha[root].to_string(), "(0,...)");
        // depth via parent pointers
        for u in 0..t.node_count() {
            let mut depth = 0;
            let mut x = u;
            while let Some(p) = w.parent[x] {
                depth += 1;
                x = p;
            }
            assert_eq!(w.alpha[u].depth(), depth);
        }
    }

    #[test]
    fn labels_order_and_prefix_exhaustively() {
        let t = six_leaf();
        for root in 0..t.node_count() {
            let w = well_number(&t, root).unwrap();
            let nc = t.node_count();
            for a in 0..nc {
                for b in 0..nc {
                    if a == b {
                        continue;
                    }
                    // injective
                    assert_ne!(w.alpha[a], w.alpha[b]);
                    // ancestors come first
                    if w.is_ancestor(a, b) {
                        assert!(w.alpha[a] < w.alpha[b]);
                    }
                    // incomparable nodes: their descendants compare the same way
                    if !w.is_ancestor(a, b) && !w.is_ancestor(b, a) {
                        for da in (0..nc).filter(|&x| x == a || w.is_ancestor(a, x)) {
                            for db in (0..nc).filter(|&x| x == b || w.is_ancestor(b, x)) {
                                assert_eq!(w.alpha[da] < w.alpha[db], w.alpha[a] < w.alpha[b]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sibling_subtrees_are_ordered() {
        let t = six_leaf();
        let root = t.root().unwrap();
        let w = well_number(&t, root).unwrap();
        let kids = t.children_from(root);
        let mut first_child: Vec<usize> = kids[root].clone();
        first_child.sort_by(|&a, &b| w.alpha[a].cmp(&w.alpha[b]));
        let below = |c: usize| -> Vec<usize> {
            (0..t.node_count())
                .filter(|&x| x == c || w.is_ancestor(c, x))
                .collect()
        };
        let (c1, c2) = (first_child[0], first_child[1]);
        for x in below(c1) {
            for y in below(c2) {
                assert!(w.alpha[x] < w.alpha[y]);
            }
        }
    }

    #[test]
    fn relabelling_is_well_numbered() {
        let t = six_leaf();
        let w = well_number(&t, t.root().unwrap()).unwrap();
        // leaves appear left to right: 6 2 4 | 1 3 5 after sorting children by min leaf
        // children of root: {2,4,6} (min 2) vs {1,3,5} (min 1) -> second subtree first
        assert_eq!(w.order, vec![1, 3, 5, 2, 6, 4]);
        let r = t.relabel_leaves(&w.relabel).unwrap();
        let w2 = well_number(&r, r.root().unwrap()).unwrap();
        for i in 1..r.n() {
            assert!(w2.alpha[r.leaf_node(i)] < w2.alpha[r.leaf_node(i + 1)]);
        }
    }

    #[test]
    fn bad_root() {
        let t = six_leaf();
        assert!(well_number(&t, 999).is_err());
    }
}
