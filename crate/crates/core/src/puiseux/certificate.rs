//! A matrix over Puiseux polynomials whose 3-minors realize a tree's
//! 3-dissimilarity map: `-val(det M(i,j,k)) = W(i,j,k)` for every triple.
//!
//! Construction, for a tree with strictly positive weights and metric `D`:
//!
//! 1. `E = max_i D(i,n)` and `D'` is the rerooted metric, ultrametric on
//!    `[n-1]` with `D'(i,n) = 2E`.
//! 2. `T''` is the equidistant tree of `D'` on `[n-1]`. Edge `e` gets the
//!    term `a(e) t^(2h(e))`, where `h(e)` is the height of its upper node
//!    and the `a(e)` are distinct positive integers.
//! 3. `x_i(t)` sums the terms on the root-to-`i` path and `x_n = t^(2E)`,
//!    so that `deg(x_j - x_i) = D'(i,j)`.
//! 4. Column `i` is `(1, x_i, x_i^2)` times `t^(2(D(i,n) - E))`. A minor is
//!    then a scaled Vandermonde determinant of degree
//!    `D(i,j) + D(i,k) + D(j,k)`.
//! 5. Substituting `t -> t^(-1/2)` turns that degree into `-2 val`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dissim::{reroot_ultrametric, DissimTensor};
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::subsets;
use crate::trees::{build_equidistant, node_heights, serialize_newick, WeightedTree};
use crate::tropical::{Verdict, Witness};

use super::{det3, PuiseuxPoly};

const RESAMPLE_ATTEMPTS: u64 = 64;

/// One edge of the equidistant tree with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertEdge<S> {
    pub parent: usize,
    pub child: usize,
    /// Height of `parent`; the edge's term is `label * t^(2 * height)`.
    pub height: S,
    pub leaves_below: Vec<usize>,
    pub label: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate3<S> {
    /// The input tree.
    pub newick: String,
    pub e: S,
    /// The rerooted metric `D'`.
    pub rerooted: DistanceMatrix<S>,
    /// The equidistant tree of `D'` on `[n-1]`.
    pub equidistant: String,
    pub edges: Vec<CertEdge<S>>,
    /// `x_1(t), ..., x_n(t)`, before substitution.
    pub x: Vec<PuiseuxPoly<S>>,
    /// The final 3 x n matrix (after `t -> t^(-1/2)`).
    pub matrix: [Vec<PuiseuxPoly<S>>; 3],
}

impl<S: Scalar> Certificate3<S> {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `det` of columns `i, j, k` (1-based, in the given order).
    pub fn minor(&self, i: usize, j: usize, k: usize) -> PuiseuxPoly<S> {
        let col = |r: usize| [i, j, k].map(|c| self.matrix[r][c - 1].clone());
        det3(&[col(0), col(1), col(2)])
    }

    /// The matrix before `t -> t^(-1/2)`.
    pub fn pre_substitution(&self) -> [Vec<PuiseuxPoly<S>>; 3] {
        let back = -S::two();
        self.matrix
            .clone()
            .map(|row| row.iter().map(|p| p.substitute_power(&back)).collect())
    }

    /// Pairs `(i, j)` where `deg(x_j - x_i) != D'(i,j)`.
    pub fn degree_mismatches(&self) -> Vec<(usize, usize)> {
        degree_mismatches(&self.x, &self.rerooted)
    }
}

fn degree_mismatches<S: Scalar>(
    x: &[PuiseuxPoly<S>],
    dp: &DistanceMatrix<S>,
) -> Vec<(usize, usize)> {
    dp.pairs()
        .filter(|&(i, j, v)| (&x[j - 1] - &x[i - 1]).deg() != Some(v))
        .map(|(i, j, _)| (i, j))
        .collect()
}

struct Skeleton<S> {
    e: S,
    d: DistanceMatrix<S>,
    rerooted: DistanceMatrix<S>,
    equidistant: WeightedTree<S>,
    // (parent, child, height, leaves below), in the equidistant tree's edge order
    edges: Vec<(usize, usize, S, Vec<usize>)>,
    // edge indices on the root-to-leaf path, per label 1..n-1
    paths: Vec<Vec<usize>>,
}

fn skeleton<S: Scalar>(tree: &WeightedTree<S>) -> Result<Skeleton<S>> {
    let n = tree.n();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "a certificate needs n >= 3, got {n}"
        )));
    }
    if !tree.is_strictly_positive() {
        return Err(Error::Precondition(
            "every edge weight must be strictly positive".into(),
        ));
    }
    let d = tree.distance_matrix();
    let e = (1..n).map(|i| d.get(i, n).clone()).max().expect("n >= 3");
    let rerooted = reroot_ultrametric(&d, &e)?;
    let head: Vec<usize> = (1..n).collect();
    let equidistant = build_equidistant(&rerooted.restrict(&head))?;
    let root = equidistant.root().expect("equidistant trees are rooted");
    let heights = node_heights(&equidistant);
    let parents = equidistant.parents_from(root);

    let mut edges: Vec<(usize, usize, S, Vec<usize>)> = equidistant
        .edges()
        .iter()
        .map(|ed| {
            let (p, c) = if parents[ed.b].is_some_and(|(p, _)| p == ed.a) {
                (ed.a, ed.b)
            } else {
                (ed.b, ed.a)
            };
            (p, c, heights[p].clone(), Vec::new())
        })
        .collect();
    let mut paths = Vec::with_capacity(n - 1);
    for label in 1..n {
        let mut path = Vec::new();
        let mut u = equidistant.leaf_node(label);
        while let Some((p, idx)) = parents[u] {
            path.push(idx);
            edges[idx].3.push(label);
            u = p;
        }
        path.reverse();
        paths.push(path);
    }
    for ed in edges.iter_mut() {
        ed.3.sort_unstable();
    }
    Ok(Skeleton {
        e,
        d,
        rerooted,
        equidistant,
        edges,
        paths,
    })
}

fn assemble<S: Scalar>(
    tree: &WeightedTree<S>,
    sk: &Skeleton<S>,
    labels: &[i64],
) -> Certificate3<S> {
    let n = tree.n();
    let two = S::two();
    let mut x: Vec<PuiseuxPoly<S>> = sk
        .paths
        .iter()
        .map(|path| {
            PuiseuxPoly::from_terms(
                path.iter()
                    .map(|&k| (sk.edges[k].2.clone() * two.clone(), S::from_int(labels[k]))),
            )
        })
        .collect();
    x.push(PuiseuxPoly::monomial(S::one(), sk.e.clone() * two.clone()));

    let inv_sqrt = -S::one().half();
    let mut matrix: [Vec<PuiseuxPoly<S>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (i, xi) in x.iter().enumerate() {
        let shift = if i + 1 == n {
            S::zero()
        } else {
            sk.d.get(i + 1, n).clone()
        };
        let scale = PuiseuxPoly::monomial(S::one(), (shift - sk.e.clone()) * two.clone());
        let col = [PuiseuxPoly::constant(S::one()), xi.clone(), xi * xi];
        for (r, entry) in col.iter().enumerate() {
            matrix[r].push((&scale * entry).substitute_power(&inv_sqrt));
        }
    }
    Certificate3 {
        newick: serialize_newick(tree),
        e: sk.e.clone(),
        rerooted: sk.rerooted.clone(),
        equidistant: serialize_newick(&sk.equidistant),
        edges: sk
            .edges
            .iter()
            .zip(labels)
            .map(|((p, c, h, below), &label)| CertEdge {
                parent: *p,
                child: *c,
                height: h.clone(),
                leaves_below: below.clone(),
                label,
            })
            .collect(),
        x,
        matrix,
    }
}

/// Builds the certificate with labels `1, 2, ..., #edges` in the
/// equidistant tree's edge order. If some `deg(x_j - x_i)` falls short of
/// `D'(i,j)`, labels are redrawn from a seeded shuffle.
pub fn build_certificate<S: Scalar>(tree: &WeightedTree<S>) -> Result<Certificate3<S>> {
    let sk = skeleton(tree)?;
    let k = sk.edges.len() as i64;
    let mut labels: Vec<i64> = (1..=k).collect();
    for attempt in 0..=RESAMPLE_ATTEMPTS {
        let cert = assemble(tree, &sk, &labels);
        if cert.degree_mismatches().is_empty() {
            return Ok(cert);
        }
        let mut pool: Vec<i64> = (1..=16 * k.max(1)).collect();
        pool.shuffle(&mut ChaCha8Rng::seed_from_u64(attempt));
        labels = pool[..k as usize].to_vec();
    }
    Err(Error::Precondition(
        "no noncancelling edge labels found".into(),
    ))
}

/// Builds the certificate with the given labels (one per equidistant-tree
/// edge, in edge order) and no degree check.
pub fn build_certificate_with_labels<S: Scalar>(
    tree: &WeightedTree<S>,
    labels: &[i64],
) -> Result<Certificate3<S>> {
    let sk = skeleton(tree)?;
    if labels.len() != sk.edges.len() {
        return Err(Error::OutOfRange(format!(
            "expected {} edge labels, got {}",
            sk.edges.len(),
            labels.len()
        )));
    }
    Ok(assemble(tree, &sk, labels))
}

/// Checks `-val(det M(i,j,k)) = W(i,j,k)` on every triple. The witness holds
/// `(W, -val)` for the first failing triple in lexicographic order, or just
/// `(W)` when the minor vanishes.
pub fn verify_certificate<S: Scalar>(
    c: &Certificate3<S>,
    w: &DissimTensor<S>,
) -> Result<Verdict<S>> {
    if w.m() != 3 || w.n() != c.n() {
        return Err(Error::OutOfRange(format!(
            "certificate has n = {} but the tensor has n = {}, m = {}",
            c.n(),
            w.n(),
            w.m()
        )));
    }
    let triples: Vec<Vec<usize>> = subsets(c.n(), 3).collect();
    let results: Vec<Option<Witness<S>>> = triples
        .par_iter()
        .map(|s| {
            let target = w.get(s).clone();
            let got = c.minor(s[0], s[1], s[2]).val().map(|v| -v.clone());
            if got.as_ref() == Some(&target) {
                return None;
            }
            let mut values = vec![target];
            values.extend(got);
            Some(Witness {
                context: vec![],
                indices: s.clone(),
                values,
            })
        })
        .collect();
    Ok(Verdict {
        witness: results.into_iter().flatten().next(),
        checked: triples.len(),
    })
}
