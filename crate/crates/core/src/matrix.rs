//! Dissimilarity matrices on `[n]`.

use crate::scalar::Scalar;
use crate::subsets::subsets;

/// A symmetric map on unordered pairs of `[n] = {1, ..., n}` with an
/// implicit zero diagonal. Entries may be negative: this is a raw
/// dissimilarity, and metric properties are checked by predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceMatrix<S> {
    n: usize,
    // Row-major n x n, kept symmetric.
    data: Vec<S>,
}

impl<S: Scalar> DistanceMatrix<S> {
    /// The all-zero matrix. Panics if `n < 2`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 2, "a distance matrix needs n >= 2, got {n}");
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    /// Builds a matrix from `f(i, j)` evaluated for every `1 <= i < j <= n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut d = Self::zeros(n);
        for i in 1..=n {
            for j in i + 1..=n {
                d.set(i, j, f(i, j));
            }
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `D(i, j)` for 1-based labels; `D(i, i) = 0`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        assert!(i != j, "the diagonal is fixed at zero");
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.data[(j - 1) * self.n + (i - 1)] = v.clone();
        self.data[(i - 1) * self.n + (j - 1)] = v;
    }

    /// `(i, j, D(i, j))` for `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        (1..=self.n).flat_map(move |i| (i + 1..=self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.pairs().all(|(_, _, v)| !v.is_negative())
    }

    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.pairs()
            .find(|(_, _, v)| v.is_negative())
            .map(|(i, j, _)| (i, j))
    }

    pub fn max_entry(&self) -> S {
        self.pairs()
            .map(|(_, _, v)| v.clone())
            .max()
            .expect("n >= 2 guarantees one pair")
    }

    /// The sub-matrix on `labels`, relabelled `1..=labels.len()` in the given order.
    pub fn restrict(&self, labels: &[usize]) -> Self {
        Self::from_fn(labels.len(), |a, b| {
            self.get(labels[a - 1], labels[b - 1]).clone()
        })
    }

    /// `(pi . D)(pi(i), pi(j)) = D(i, j)` where `perm[i - 1] = pi(i)`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zeros(self.n);
        for (i, j, v) in self.pairs() {
            out.set(perm[i - 1], perm[j - 1], v.clone());
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(&S) -> S) -> Self {
        Self::from_fn(self.n, |i, j| f(self.get(i, j)))
    }

    pub fn scale(&self, lambda: &S) -> Self {
        self.map(|v| v.clone() * lambda.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            self.get(i, j).clone() + other.get(i, j).clone()
        })
    }

    /// Iterates the 4-subsets `{i < j < k < l}` of `[n]`.
    pub fn quadruples(&self) -> impl Iterator<Item = [usize; 4]> {
        subsets(self.n, 4).map(|q| [q[0], q[1], q[2], q[3]])
    }

    /// The three pairing sums `(D(i,j)+D(k,l), D(i,k)+D(j,l), D(i,l)+D(j,k))`.
    pub fn pairing_sums(&self, [i, j, k, l]: [usize; 4]) -> [S; 3] {
        [
            self.get(i, j).clone() + self.get(k, l).clone(),
            self.get(i, k).clone() + self.get(j, l).clone(),
            self.get(i, l).clone() + self.get(j, k).clone(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn symmetric_with_zero_diagonal() {
        let d =
            DistanceMatrix::<Rational>::from_fn(4, |i, j| Rational::from_int((10 * i + j) as i64));
        assert_eq!(d.get(2, 3), d.get(3, 2));
        assert_eq!(*d.get(3, 3), Rational::from_int(0));
        assert_eq!(d.pairs().count(), 6);
    }

    #[test]
    fn relabel_moves_entries() {
        let d = DistanceMatrix::<Rational>::from_fn(3, |i, j| Rational::from_int((i * j) as i64));
        let p = d.relabel(&[2, 3, 1]);
        // D(1,2) = 2 lands on (pi(1), pi(2)) = (2, 3)
        assert_eq!(*p.get(2, 3), Rational::from_int(2));
        assert_eq!(*p.get(1, 2), Rational::from_int(3));
    }
}
