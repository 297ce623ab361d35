//! Collapsing the minimal subtree spanned by a leaf set.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subsets::normalize;

use super::{Edge, WeightedTree};

#[derive(Debug, Clone)]
pub struct Contraction<S> {
    /// The contracted tree; the collapsed subtree is leaf `1`.
    pub tree: WeightedTree<S>,
    /// Total weight of the collapsed subtree.
    pub weight: S,
    /// `label_map[l - 1]` is the new label of old leaf `l`, or `None` if
    /// `l` was collapsed.
    pub label_map: Vec<Option<usize>>,
}

impl<S> Contraction<S> {
    /// Label of the collapsed subtree in the new tree.
    pub const MERGED: usize = 1;
}

/// Collapses the smallest subtree containing the leaves `r` to a point that
/// becomes leaf `1` of the result. Every other leaf keeps its relative order
/// and is renumbered from `2`.
///
/// When the collapsed point still has several branches hanging off it, a
/// new leaf is attached to it by a zero-weight edge so that it remains a
/// leaf; this leaves all path lengths unchanged.
pub fn contract_subtree<S: Scalar>(tree: &WeightedTree<S>, r: &[usize]) -> Result<Contraction<S>> {
    let n = tree.n();
    let r = normalize(r, n)
        .ok_or_else(|| Error::OutOfRange(format!("{r:?} is not a non-empty set of leaves")))?;
    if r.len() == n {
        return Err(Error::OutOfRange(
            "cannot contract the whole leaf set".into(),
        ));
    }

    // nodes and edges of the spanned subtree
    let mut in_span = vec![false; tree.node_count()];
    let mut edge_in_span = vec![false; tree.edges().len()];
    let start = tree.leaf_node(r[0]);
    in_span[start] = true;
    let parent = tree.parents_from(start);
    for &label in &r[1..] {
        let mut u = tree.leaf_node(label);
        in_span[u] = true;
        while let Some((p, e)) = parent[u] {
            if edge_in_span[e] {
                break;
            }
            edge_in_span[e] = true;
            in_span[p] = true;
            u = p;
        }
    }
    let weight = tree
        .edges()
        .iter()
        .zip(&edge_in_span)
        .filter(|(_, &s)| s)
        .fold(S::zero(), |mut acc, (e, _)| {
            acc += &e.weight;
            acc
        });

    // new ids: merged node 0, then surviving nodes in order
    let mut index = vec![0usize; tree.node_count()];
    let mut next = 1;
    for u in 0..tree.node_count() {
        if !in_span[u] {
            index[u] = next;
            next += 1;
        }
    }
    let mut edges: Vec<Edge<S>> = tree
        .edges()
        .iter()
        .filter(|e| !(in_span[e.a] && in_span[e.b]))
        .map(|e| Edge {
            a: index[e.a],
            b: index[e.b],
            weight: e.weight.clone(),
        })
        .collect();
    let merged_degree = edges.iter().filter(|e| e.a == 0 || e.b == 0).count();
    let merged_leaf = if merged_degree == 1 {
        0
    } else {
        edges.push(Edge {
            a: 0,
            b: next,
            weight: S::zero(),
        });
        next += 1;
        next - 1
    };

    let mut label_map = vec![None; n];
    let mut leaves = vec![(Contraction::<S>::MERGED, merged_leaf)];
    let mut new_label = 2;
    for l in 1..=n {
        if r.binary_search(&l).is_err() {
            label_map[l - 1] = Some(new_label);
            leaves.push((new_label, index[tree.leaf_node(l)]));
            new_label += 1;
        }
    }
    let tree = WeightedTree::new(next, edges, &leaves, None)?;
    Ok(Contraction {
        tree,
        weight,
        label_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::fixtures::quartet;
    use crate::trees::parse_newick;
    use crate::Rational;
    use num_traits::Zero;

    #[test]
    fn quartet_cherry() {
        let t = quartet();
        let c = contract_subtree(&t, &[1, 2]).unwrap();
        assert_eq!(c.tree.n(), 3);
        assert_eq!(c.weight, Rational::from_int(2));
        assert_eq!(c.label_map, vec![None, None, Some(2), Some(3)]);
        assert_eq!(*c.tree.distance_matrix().get(1, 2), Rational::from_int(2));
        // D(R, 3, 4) = D'(R', 3', 4') + D(R)
        assert_eq!(
            t.steiner_weight(&[1, 2, 3, 4]).unwrap(),
            c.tree.steiner_weight(&[1, 2, 3]).unwrap() + c.weight
        );
    }

    #[test]
    fn singleton_is_a_relabelling() {
        let t = quartet();
        let c = contract_subtree(&t, &[3]).unwrap();
        assert!(c.weight.is_zero());
        assert_eq!(c.tree.node_count(), t.node_count());
        let back: Vec<usize> = vec![3, 1, 2, 4];
        assert!(c.tree.relabel_leaves(&back).unwrap().is_isomorphic(&t));
    }

    #[test]
    fn non_pendant_span_gets_a_zero_leaf() {
        // path 1..4 passes both internal nodes of the caterpillar
        let t = parse_newick::<Rational>("((1:1,2:1):1,(3:1,4:1):1,5:1);").unwrap();
        let c = contract_subtree(&t, &[1, 3]).unwrap();
        assert_eq!(c.weight, Rational::from_int(4));
        for (i, j) in [(2, 3), (2, 4), (3, 4)] {
            let old_i = c.label_map.iter().position(|&m| m == Some(i)).unwrap() + 1;
            let old_j = c.label_map.iter().position(|&m| m == Some(j)).unwrap() + 1;
            assert_eq!(
                t.steiner_weight(&[1, 3, old_i, old_j]).unwrap(),
                c.tree.steiner_weight(&[1, i, j]).unwrap() + c.weight.clone()
            );
        }
    }

    #[test]
    fn whole_set_is_rejected() {
        assert!(contract_subtree(&quartet(), &[1, 2, 3, 4]).is_err());
        assert!(contract_subtree(&quartet(), &[]).is_err());
    }
}
