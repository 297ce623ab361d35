//! Equidistant (ultrametric) tree realization.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::tropical::is_ultrametric;

use super::{Edge, WeightedTree};

/// Realizes an ultrametric `d` by a rooted tree in which every leaf lies at
/// distance `max(d) / 2` from the root. Clusters are merged bottom-up: all
/// clusters joined by pairs at distance `h` hang from one new node at
/// height `h / 2`.
pub fn build_equidistant<S: Scalar>(d: &DistanceMatrix<S>) -> Result<WeightedTree<S>> {
    let verdict = is_ultrametric(d);
    if let Some(w) = verdict.witness {
        return Err(Error::Violation {
            what: "matrix is not an ultrametric".into(),
            witness: w.to_string(),
        });
    }
    if let Some((i, j)) = d.first_negative() {
        return Err(Error::Violation {
            what: "ultrametric has a negative entry".into(),
            witness: format!("{{{i},{j}}}: {}", d.get(i, j)),
        });
    }
    let n = d.n();
    let mut pairs: Vec<(usize, usize, S)> = d.pairs().map(|(i, j, v)| (i, j, v.clone())).collect();
    pairs.sort_by(|a, b| a.2.cmp(&b.2));

    // cluster id per leaf, plus the top node and height of each cluster
    let mut cluster: Vec<usize> = (0..n).collect();
    let mut top: Vec<usize> = (0..n).collect();
    let mut height: Vec<S> = vec![S::zero(); n];
    let mut edges = Vec::new();
    let mut next_node = n;

    let mut start = 0;
    while start < pairs.len() {
        let value = pairs[start].2.clone();
        let end = start + pairs[start..].iter().take_while(|p| p.2 == value).count();
        // group clusters linked at this distance
        let mut group: Vec<usize> = (0..top.len()).collect();
        fn find(g: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while g[r] != r {
                r = g[r];
            }
            g[x] = r;
            r
        }
        for &(i, j, _) in &pairs[start..end] {
            let (a, b) = (
                find(&mut group, cluster[i - 1]),
                find(&mut group, cluster[j - 1]),
            );
            if a != b {
                group[a] = b;
            }
        }
        let node_height = value.half();
        let live: Vec<usize> = {
            let mut v: Vec<usize> = cluster.clone();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut merged_into = vec![usize::MAX; top.len()];
        for &c in &live {
            let rep = find(&mut group, c);
            let members: Vec<usize> = live
                .iter()
                .copied()
                .filter(|&x| find(&mut group, x) == rep)
                .collect();
            if members.len() < 2 || merged_into[c] != usize::MAX {
                continue;
            }
            let node = next_node;
            next_node += 1;
            let new_id = top.len();
            top.push(node);
            height.push(node_height.clone());
            for &m in &members {
                edges.push(Edge {
                    a: node,
                    b: top[m],
                    weight: node_height.clone() - height[m].clone(),
                });
                merged_into[m] = new_id;
            }
        }
        for c in cluster.iter_mut() {
            if merged_into[*c] != usize::MAX {
                *c = merged_into[*c];
            }
        }
        start = end;
    }
    let root = top[cluster[0]];
    let leaves: Vec<_> = (1..=n).map(|l| (l, l - 1)).collect();
    let tree = WeightedTree::new(next_node, edges, &leaves, Some(root))?;
    debug_assert_eq!(&tree.distance_matrix(), d);
    Ok(tree)
}

/// Height of every node of a rooted tree: the largest distance from the
/// node down to a leaf below it. Panics if the tree has no root.
pub fn node_heights<S: Scalar>(tree: &WeightedTree<S>) -> Vec<S> {
    let root = tree.root().expect("node heights need a rooted tree");
    let parents = tree.parents_from(root);
    let mut order = vec![root];
    let mut k = 0;
    while k < order.len() {
        let u = order[k];
        for &(v, _) in tree.neighbors(u) {
            if parents[v].is_some_and(|(p, _)| p == u) {
                order.push(v);
            }
        }
        k += 1;
    }
    let mut h = vec![S::zero(); tree.node_count()];
    for &u in order.iter().rev() {
        if let Some((p, e)) = parents[u] {
            let cand = h[u].clone() + tree.edges()[e].weight.clone();
            if cand > h[p] {
                h[p] = cand;
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn constant_matrix_gives_a_star() {
        let d = DistanceMatrix::from_fn(4, |_, _| q(1));
        let t = build_equidistant(&d).unwrap();
        let root = t.root().unwrap();
        assert_eq!(t.degree(root), 4);
        let dist = t.distances_from(root);
        for l in 1..=4 {
            assert_eq!(dist[t.leaf_node(l)], Rational::from_frac(1, 2));
        }
        assert_eq!(t.distance_matrix(), d);
    }

    #[test]
    fn cherry_under_root() {
        let mut d = DistanceMatrix::from_fn(3, |_, _| q(4));
        d.set(1, 2, q(2));
        let t = build_equidistant(&d).unwrap();
        let h = node_heights(&t);
        let root = t.root().unwrap();
        assert_eq!(h[root], q(2));
        let parent_of_1 = t.neighbors(t.leaf_node(1))[0].0;
        assert_eq!(parent_of_1, t.neighbors(t.leaf_node(2))[0].0);
        assert_eq!(h[parent_of_1], q(1));
        assert_eq!(t.distance_matrix(), d);
    }

    #[test]
    fn zero_entries_merge_at_height_zero() {
        let mut d = DistanceMatrix::from_fn(3, |_, _| q(2));
        d.set(1, 2, q(0));
        let t = build_equidistant(&d).unwrap();
        assert_eq!(t.distance_matrix(), d);
    }

    #[test]
    fn rejects_non_ultrametric() {
        let mut d = DistanceMatrix::zeros(3);
        d.set(1, 2, q(1));
        d.set(1, 3, q(2));
        d.set(2, 3, q(3));
        assert!(matches!(
            build_equidistant(&d),
            Err(Error::Violation { .. })
        ));
    }
}
