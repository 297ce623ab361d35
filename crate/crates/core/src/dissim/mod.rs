//! m-dissimilarity maps: the tropical tour formula, its m = 3 inversion and
//! membership test, and the m = 4 pairing-coordinate machinery.

mod invert;
mod linalg;
mod membership;
mod phi;
mod quartic;
mod reroot;

pub use invert::{invert3, invert3_detailed, phi3_system, InverseOutcome, InversionMethod};
pub use linalg::{solve_exact, LinearSolve};
pub use membership::{membership3, Membership3};
pub use phi::{
    cycle_sum, phi_3, phi_entry, phi_m, phi_m_with, phi_m_with_argmin, Argmin, CycleSum, Evaluator,
    Tour, HELD_KARP_THRESHOLD,
};
pub use quartic::{
    in_l, l_violations, p_project, pi4, verify_m4_characterization, M4Report, PairingKey, PiPoint,
    QuadrupleCheck,
};
pub use reroot::reroot_ultrametric;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::{binomial, colex_rank, normalize, subsets};

/// A map from the m-subsets of `[n]` to scalars. Symmetry under
/// permutations is structural (entries are keyed by sets) and tuples with
/// repeated indices, which are zero by definition, are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DissimTensor<S> {
    n: usize,
    m: usize,
    // colex order
    entries: Vec<S>,
}

impl<S: Scalar> DissimTensor<S> {
    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        if m < 2 || m > n {
            return Err(Error::OutOfRange(format!(
                "need 2 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        Ok(Self {
            n,
            m,
            entries: vec![S::zero(); binomial(n, m)],
        })
    }

    /// Evaluates `f` on every m-subset (sorted, lexicographic order).
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(&[usize]) -> S) -> Result<Self> {
        let mut t = Self::zeros(n, m)?;
        for s in subsets(n, m) {
            t.entries[colex_rank(&s)] = f(&s);
        }
        Ok(t)
    }

    pub(crate) fn from_colex(n: usize, m: usize, entries: Vec<S>) -> Self {
        debug_assert_eq!(entries.len(), binomial(n, m));
        Self { n, m, entries }
    }

    /// The matrix as a 2-dissimilarity map.
    pub fn from_matrix(d: &DistanceMatrix<S>) -> Self {
        Self::from_fn(d.n(), 2, |s| d.get(s[0], s[1]).clone()).expect("n >= 2")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Entry for a strictly increasing m-subset.
    #[inline]
    pub fn get(&self, sorted: &[usize]) -> &S {
        debug_assert_eq!(sorted.len(), self.m);
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        &self.entries[colex_rank(sorted)]
    }

    /// Entry for any ordering of distinct labels; repeated labels give zero.
    pub fn value(&self, labels: &[usize]) -> Result<S> {
        if labels.len() != self.m {
            return Err(Error::OutOfRange(format!(
                "expected {} labels, got {}",
                self.m,
                labels.len()
            )));
        }
        if labels.iter().any(|&l| l == 0 || l > self.n) {
            return Err(Error::OutOfRange(format!(
                "labels {labels:?} outside 1..={}",
                self.n
            )));
        }
        Ok(match normalize(labels, self.n) {
            Some(s) => self.get(&s).clone(),
            None => S::zero(),
        })
    }

    pub fn set(&mut self, labels: &[usize], v: S) -> Result<()> {
        let s = normalize(labels, self.n)
            .filter(|s| s.len() == self.m)
            .ok_or_else(|| {
                Error::OutOfRange(format!("{labels:?} is not an m-subset of [{}]", self.n))
            })?;
        self.entries[colex_rank(&s)] = v;
        Ok(())
    }

    /// `(subset, value)` in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &S)> + '_ {
        subsets(self.n, self.m).map(move |s| {
            let v = &self.entries[colex_rank(&s)];
            (s, v)
        })
    }

    /// `(pi . W)(pi(V)) = W(V)` with `perm[l - 1] = pi(l)`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n, self.m).unwrap();
        for (s, v) in self.iter() {
            let image: Vec<usize> = s.iter().map(|&l| perm[l - 1]).collect();
            out.set(&image, v.clone()).expect("perm is a permutation");
        }
        out
    }

    pub fn map(&self, f: impl FnMut(&S) -> S) -> Self {
        Self::from_colex(self.n, self.m, self.entries.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.m), (other.n, other.m));
        Self::from_colex(
            self.n,
            self.m,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn keyed_on_sets() {
        let mut t = DissimTensor::<Rational>::zeros(5, 3).unwrap();
        t.set(&[3, 1, 2], Rational::from_int(7)).unwrap();
        assert_eq!(t.value(&[2, 3, 1]).unwrap(), Rational::from_int(7));
        assert_eq!(*t.get(&[1, 2, 3]), Rational::from_int(7));
        assert_eq!(t.value(&[1, 1, 2]).unwrap(), Rational::from_int(0));
        assert!(t.value(&[1, 2]).is_err());
        assert!(t.set(&[1, 1, 2], Rational::from_int(1)).is_err());
        assert_eq!(t.iter().count(), 10);
    }

    #[test]
    fn m_range() {
        assert!(DissimTensor::<Rational>::zeros(4, 1).is_err());
        assert!(DissimTensor::<Rational>::zeros(4, 5).is_err());
        assert!(DissimTensor::<Rational>::zeros(4, 4).is_ok());
    }
}
