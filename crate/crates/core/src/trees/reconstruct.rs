//! Tree reconstruction from a tree metric by exact leaf insertion.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::tropical::four_point_check;

use super::{Edge, WeightedTree};

/// The unique tree realizing the tree metric `d`.
///
/// Leaves are inserted in label order. Leaf `k` hangs at distance
/// `min_{i<j<k} (D(i,k) + D(j,k) - D(i,j)) / 2` from the current tree, on
/// the path between a minimizing pair. The result has no unlabelled
/// degree-two vertices and no zero-weight internal edges.
pub fn reconstruct_tree<S: Scalar>(d: &DistanceMatrix<S>) -> Result<WeightedTree<S>> {
    let verdict = four_point_check(d, false);
    if let Some(w) = verdict.witness {
        return Err(Error::Violation {
            what: "matrix fails the four-point condition".into(),
            witness: w.to_string(),
        });
    }
    let n = d.n();
    // leaf l is node l - 1; adjacency with weights
    let mut adj: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
    connect(&mut adj, 0, 1, d.get(1, 2).clone());

    for k in 3..=n {
        let mut best: Option<(S, usize, usize)> = None;
        for i in 1..k {
            for j in i + 1..k {
                let gromov =
                    (d.get(i, k).clone() + d.get(j, k).clone() - d.get(i, j).clone()).half();
                if best.as_ref().is_none_or(|(b, _, _)| gromov < *b) {
                    best = Some((gromov, i, j));
                }
            }
        }
        let (pendant, i, j) = best.expect("k >= 3 leaves a pair");
        let offset = d.get(i, k).clone() - pendant.clone();
        let path = path_between(&adj, i - 1, j - 1);

        // walk the path to the attachment point; never attach to a leaf
        let mut acc = S::zero();
        let mut attach = None;
        let last = path.len() - 2;
        for (s, w) in path.windows(2).enumerate() {
            let (u, v) = (w[0], w[1]);
            let len = weight(&adj, u, v);
            let next = acc.clone() + len.clone();
            if offset == acc && u >= n {
                attach = Some(u);
                break;
            }
            if offset == acc || offset < next || (offset == next && s == last) {
                let left = offset.clone() - acc.clone();
                let mid = adj.len();
                adj.push(Vec::new());
                disconnect(&mut adj, u, v);
                connect(&mut adj, u, mid, left.clone());
                connect(&mut adj, mid, v, len - left);
                attach = Some(mid);
                break;
            }
            acc = next;
        }
        let at = attach.expect("attachment point lies on the path");
        connect(&mut adj, at, k - 1, pendant);
    }

    let mut edges = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for (v, w) in nbrs {
            if u < *v {
                edges.push(Edge {
                    a: u,
                    b: *v,
                    weight: w.clone(),
                });
            }
        }
    }
    let leaves: Vec<_> = (1..=n).map(|l| (l, l - 1)).collect();
    let tree = WeightedTree::new(adj.len(), edges, &leaves, None)?.simplified();
    if &tree.distance_matrix() != d {
        return Err(Error::Precondition(
            "reconstructed tree does not reproduce the matrix".into(),
        ));
    }
    Ok(tree)
}

fn connect<S: Clone>(adj: &mut [Vec<(usize, S)>], a: usize, b: usize, w: S) {
    adj[a].push((b, w.clone()));
    adj[b].push((a, w));
}

fn disconnect<S>(adj: &mut [Vec<(usize, S)>], a: usize, b: usize) {
    adj[a].retain(|(x, _)| *x != b);
    adj[b].retain(|(x, _)| *x != a);
}

fn weight<S: Clone>(adj: &[Vec<(usize, S)>], a: usize, b: usize) -> S {
    adj[a].iter().find(|(x, _)| *x == b).unwrap().1.clone()
}

fn path_between<S>(adj: &[Vec<(usize, S)>], from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    let mut stack = vec![from];
    parent[from] = from;
    while let Some(u) = stack.pop() {
        if u == to {
            break;
        }
        for (v, _) in &adj[u] {
            if parent[*v] == usize::MAX {
                parent[*v] = u;
                stack.push(*v);
            }
        }
    }
    let mut path = vec![to];
    let mut u = to;
    while u != from {
        u = parent[u];
        path.push(u);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::fixtures::{quartet, star};
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn quartet_round_trip() {
        let t = quartet();
        let r = reconstruct_tree(&t.distance_matrix()).unwrap();
        assert!(r.is_isomorphic(&t));
        assert!(!r.has_degree_two_vertices());
        // the internal edge has weight 1
        let internal: Vec<_> = r
            .edges()
            .iter()
            .filter(|e| !r.is_leaf(e.a) && !r.is_leaf(e.b))
            .collect();
        assert_eq!(internal.len(), 1);
        assert_eq!(internal[0].weight, q(1));
    }

    #[test]
    fn constant_matrix_is_a_half_star() {
        let d = DistanceMatrix::from_fn(5, |_, _| q(1));
        let r = reconstruct_tree(&d).unwrap();
        assert!(r.is_isomorphic(&star(5, Rational::from_frac(1, 2))));
    }

    #[test]
    fn perturbed_constant_matrix_is_rejected_at_1245() {
        let mut d = DistanceMatrix::from_fn(5, |_, _| q(1));
        d.set(4, 5, q(2));
        match reconstruct_tree(&d) {
            Err(Error::Violation { witness, .. }) => {
                assert!(witness.starts_with("{1,2,4,5}"), "{witness}")
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn zero_distances_and_two_leaves() {
        let d = DistanceMatrix::from_fn(2, |_, _| q(3));
        let r = reconstruct_tree(&d).unwrap();
        assert_eq!(r.distance_matrix(), d);

        let mut z = DistanceMatrix::from_fn(4, |_, _| q(2));
        z.set(1, 2, q(0));
        z.set(1, 3, q(1));
        z.set(2, 3, q(1));
        let r = reconstruct_tree(&z).unwrap();
        assert_eq!(r.distance_matrix(), z);
    }
}
