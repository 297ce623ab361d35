//! Enumeration and ranking of k-subsets of `1..=n`.

use itertools::Itertools;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All k-subsets of `1..=n` as sorted vectors, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(k)
}

/// Colexicographic rank of a strictly increasing subset of `1..=n`.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c - 1, i + 1))
        .sum()
}

/// Sorts `labels` and checks that they are distinct and lie in `1..=n`.
pub fn normalize(labels: &[usize], n: usize) -> Option<Vec<usize>> {
    let mut v = labels.to_vec();
    v.sort_unstable();
    let ok = v.first().is_some_and(|&a| a >= 1)
        && v.last().is_some_and(|&b| b <= n)
        && v.windows(2).all(|w| w[0] < w[1]);
    ok.then_some(v)
}

pub(crate) fn join_labels(labels: &[usize]) -> String {
    labels.iter().join(",")
}
