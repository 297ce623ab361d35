//! The tour formula: `W(V) = 1/2 * min` over cyclic orders of `V` of the
//! closed-tour sum of pairwise entries.
//!
//! Two evaluators are provided. Brute force enumerates the `(m-1)!/2`
//! tours that start at the smallest label, one per reversal pair. Held-Karp
//! runs the usual subset DP from the smallest label. Both are exact and are
//! cross-checked in tests.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::{colex_rank, normalize, subsets};

use super::DissimTensor;

/// `Evaluator::Auto` switches to Held-Karp for subsets larger than this.
pub const HELD_KARP_THRESHOLD: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    #[default]
    Auto,
    BruteForce,
    HeldKarp,
}

/// A cyclic order of leaf labels, rotated to start at its smallest label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>) -> Self {
        assert!(!order.is_empty());
        let start = order.iter().position_min().unwrap();
        let mut v = order;
        v.rotate_left(start);
        Tour(v)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// The same cycle traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v[1..].reverse();
        Tour(v)
    }

    /// Conjugation by the transposition of labels `a` and `b`.
    pub fn conjugated(&self, a: usize, b: usize) -> Self {
        let v = self
            .0
            .iter()
            .map(|&x| {
                if x == a {
                    b
                } else if x == b {
                    a
                } else {
                    x
                }
            })
            .collect();
        Tour::new(v)
    }
}

/// A closed-tour sum for one subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSum<S> {
    pub subset: Vec<usize>,
    pub tour: Tour,
    pub value: S,
}

/// `D(v1,v2) + D(v2,v3) + ... + D(vm,v1)` around `tour`.
pub fn cycle_sum<S: Scalar>(d: &DistanceMatrix<S>, tour: &Tour) -> S {
    let o = tour.order();
    let mut acc = S::zero();
    for k in 0..o.len() {
        acc += d.get(o[k], o[(k + 1) % o.len()]);
    }
    acc
}

fn check_m(n: usize, m: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(Error::OutOfRange(format!(
            "need 2 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

fn local_weights<S: Scalar>(d: &DistanceMatrix<S>, subset: &[usize]) -> Vec<Vec<S>> {
    subset
        .iter()
        .map(|&a| subset.iter().map(|&b| d.get(a, b).clone()).collect())
        .collect()
}

fn min_tour_brute<S: Scalar>(w: &[Vec<S>]) -> S {
    let m = w.len();
    if m == 2 {
        return w[0][1].clone() + w[1][0].clone();
    }
    let mut best: Option<S> = None;
    for perm in (1..m).permutations(m - 1) {
        // one representative per reversal pair
        if perm[0] > perm[m - 2] {
            continue;
        }
        let mut acc = w[0][perm[0]].clone();
        for k in 0..m - 2 {
            acc += &w[perm[k]][perm[k + 1]];
        }
        acc += &w[perm[m - 2]][0];
        if best.as_ref().is_none_or(|b| acc < *b) {
            best = Some(acc);
        }
    }
    best.unwrap()
}

fn min_tour_held_karp<S: Scalar>(w: &[Vec<S>]) -> S {
    let k = w.len() - 1;
    let full = (1usize << k) - 1;
    let mut dp: Vec<Option<S>> = vec![None; (full + 1) * k];
    for j in 0..k {
        dp[(1 << j) * k + j] = Some(w[0][j + 1].clone());
    }
    for mask in 1..=full {
        for j in 0..k {
            if mask & (1 << j) == 0 {
                continue;
            }
            let Some(cur) = dp[mask * k + j].clone() else {
                continue;
            };
            for nxt in 0..k {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let cand = cur.clone() + w[j + 1][nxt + 1].clone();
                let slot = &mut dp[(mask | (1 << nxt)) * k + nxt];
                if slot.as_ref().is_none_or(|s| cand < *s) {
                    *slot = Some(cand);
                }
            }
        }
    }
    (0..k)
        .map(|j| dp[full * k + j].clone().unwrap() + w[j + 1][0].clone())
        .min()
        .unwrap()
}

/// The formula's value on one subset of size at least two.
pub fn phi_entry<S: Scalar>(
    d: &DistanceMatrix<S>,
    subset: &[usize],
    evaluator: Evaluator,
) -> Result<S> {
    let s = normalize(subset, d.n())
        .filter(|s| s.len() >= 2)
        .ok_or_else(|| {
            Error::OutOfRange(format!(
                "{subset:?} is not a subset of [{}] of size >= 2",
                d.n()
            ))
        })?;
    let w = local_weights(d, &s);
    let use_dp = match evaluator {
        Evaluator::Auto => s.len() > HELD_KARP_THRESHOLD,
        Evaluator::BruteForce => false,
        Evaluator::HeldKarp => true,
    };
    let tour = if use_dp {
        min_tour_held_karp(&w)
    } else {
        min_tour_brute(&w)
    };
    Ok(tour.half())
}

/// The m-dissimilarity map obtained from `d` by the tour formula. For a
/// tree metric this is the map of minimal spanning subtree weights.
pub fn phi_m<S: Scalar>(d: &DistanceMatrix<S>, m: usize) -> Result<DissimTensor<S>> {
    phi_m_with(d, m, Evaluator::Auto)
}

pub fn phi_m_with<S: Scalar>(
    d: &DistanceMatrix<S>,
    m: usize,
    evaluator: Evaluator,
) -> Result<DissimTensor<S>> {
    check_m(d.n(), m)?;
    if m == 2 {
        return Ok(DissimTensor::from_matrix(d));
    }
    let all: Vec<Vec<usize>> = subsets(d.n(), m).collect();
    let values: Vec<(usize, S)> = all
        .par_iter()
        .map(|s| {
            (
                colex_rank(s),
                phi_entry(d, s, evaluator).expect("valid subset"),
            )
        })
        .collect();
    let mut entries = vec![S::zero(); values.len()];
    for (rank, v) in values {
        entries[rank] = v;
    }
    Ok(DissimTensor::from_colex(d.n(), m, entries))
}

/// All minimizing tours of one subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argmin<S> {
    /// Half the minimal tour sum.
    pub value: S,
    /// Every minimizing cyclic order, both directions included, sorted.
    pub minimizers: Vec<Tour>,
    /// Number of cyclic orders examined, `(m-1)!`.
    pub examined: usize,
}

impl<S> Argmin<S> {
    pub fn contains(&self, t: &Tour) -> bool {
        self.minimizers.binary_search(t).is_ok()
    }
}

/// The value on `subset` together with the full set of minimizing tours.
pub fn phi_m_with_argmin<S: Scalar>(
    d: &DistanceMatrix<S>,
    m: usize,
    subset: &[usize],
) -> Result<Argmin<S>> {
    check_m(d.n(), m)?;
    let s = normalize(subset, d.n())
        .filter(|s| s.len() == m)
        .ok_or_else(|| {
            Error::OutOfRange(format!("{subset:?} is not an {m}-subset of [{}]", d.n()))
        })?;
    let mut sums: Vec<CycleSum<S>> = Vec::new();
    for rest in s[1..].iter().copied().permutations(m - 1) {
        let mut order = vec![s[0]];
        order.extend(rest);
        let tour = Tour(order);
        let value = cycle_sum(d, &tour);
        sums.push(CycleSum {
            subset: s.clone(),
            tour,
            value,
        });
    }
    let min = sums.iter().map(|c| c.value.clone()).min().unwrap();
    let mut minimizers: Vec<Tour> = sums
        .iter()
        .filter(|c| c.value == min)
        .map(|c| c.tour.clone())
        .collect();
    minimizers.sort();
    minimizers.dedup();
    Ok(Argmin {
        value: min.half(),
        minimizers,
        examined: sums.len(),
    })
}

/// Closed form for `m = 3`: `W(i,j,k) = (D(i,j) + D(i,k) + D(j,k)) / 2`.
pub fn phi_3<S: Scalar>(d: &DistanceMatrix<S>) -> Result<DissimTensor<S>> {
    DissimTensor::from_fn(d.n(), 3, |s| {
        (d.get(s[0], s[1]).clone() + d.get(s[0], s[2]).clone() + d.get(s[1], s[2]).clone()).half()
    })
}
