//! Max-plus predicates: corner loci, the four-point condition, ultrametrics
//! and the three-term Plücker relations.
//!
//! Every check returns a [`Verdict`]. A failing verdict carries the
//! lexicographically first violating index tuple together with the three
//! compared values, so the witness can be recomputed from the input.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::dissim::DissimTensor;
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::{join_labels, subsets};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<S> {
    /// Fixed context, e.g. the `(m-2)`-set `R` of a Plücker relation.
    pub context: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<S>,
}

impl<S: Scalar> fmt::Display for Witness<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.context.is_empty() {
            write!(f, "R={{{}}} ", join_labels(&self.context))?;
        }
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "{{{}}}: ({})",
            join_labels(&self.indices),
            vals.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<S> {
    pub witness: Option<Witness<S>>,
    /// Number of tuples examined; zero means the check was vacuous.
    pub checked: usize,
}

impl<S> Verdict<S> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn is_vacuous(&self) -> bool {
        self.checked == 0
    }
}

/// Whether the maximum of `values` is attained at least twice.
pub fn max_twice<S: Ord>(values: &[S]) -> Result<bool> {
    let max = values
        .iter()
        .max()
        .ok_or_else(|| Error::OutOfRange("max_twice of an empty list".into()))?;
    Ok(values.iter().filter(|v| *v == max).count() >= 2)
}

fn max_twice3<S: Ord>(v: &[S; 3]) -> bool {
    let max = v.iter().max().unwrap();
    v.iter().filter(|x| *x == max).count() >= 2
}

/// One term `lambda + sum_a a_i x_i` of a tropical polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropTerm<K, S> {
    pub coefficient: S,
    pub exponents: BTreeMap<K, i64>,
}

impl<K: Ord, S> TropTerm<K, S> {
    pub fn new(coefficient: S, exponents: impl IntoIterator<Item = (K, i64)>) -> Self {
        Self {
            coefficient,
            exponents: exponents.into_iter().collect(),
        }
    }
}

/// Evaluates `max_a (lambda_a + sum_i a_i x_i)` at `point`; returns the value
/// and the indices of every maximizing term. The point lies on the tropical
/// hypersurface exactly when two or more terms attain the maximum.
pub fn eval_trop_poly<K: Ord + fmt::Debug, S: Scalar>(
    terms: &[TropTerm<K, S>],
    point: &BTreeMap<K, S>,
) -> Result<(S, Vec<usize>)> {
    if terms.is_empty() {
        return Err(Error::OutOfRange(
            "tropical polynomial without terms".into(),
        ));
    }
    let mut values = Vec::with_capacity(terms.len());
    for t in terms {
        let mut v = t.coefficient.clone();
        for (k, &a) in &t.exponents {
            let x = point
                .get(k)
                .ok_or_else(|| Error::OutOfRange(format!("point has no coordinate {k:?}")))?;
            v += &(S::from_int(a) * x.clone());
        }
        values.push(v);
    }
    let max = values.iter().max().unwrap().clone();
    let argmax = (0..values.len()).filter(|&i| values[i] == max).collect();
    Ok((max, argmax))
}

/// `trop(p_ijkl) = x_ij x_kl (+) x_ik x_jl (+) x_il x_jk`, keyed by sorted pairs.
pub fn plucker_quadric<S: Scalar>(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Vec<TropTerm<(usize, usize), S>> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    [((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))]
        .into_iter()
        .map(|((a, b), (c, d))| TropTerm::new(S::zero(), [(key(a, b), 1), (key(c, d), 1)]))
        .collect()
}

/// The four-point condition.
///
/// With `strict = false` all quadruples with repetitions are included, which
/// adds non-negativity and the triangle inequality: this is the tree-metric
/// test. With `strict = true` only distinct quadruples are used, which is
/// membership in the intersection of the hypersurfaces `T(trop p_ijkl)`.
pub fn four_point_check<S: Scalar>(d: &DistanceMatrix<S>, strict: bool) -> Verdict<S> {
    let n = d.n();
    let mut checked = 0;
    let step = usize::from(strict);
    for i in 1..=n {
        for j in i + step..=n {
            for k in j + step..=n {
                for l in k + step..=n {
                    checked += 1;
                    let sums = d.pairing_sums([i, j, k, l]);
                    if !max_twice3(&sums) {
                        return Verdict {
                            witness: Some(Witness {
                                context: vec![],
                                indices: vec![i, j, k, l],
                                values: sums.to_vec(),
                            }),
                            checked,
                        };
                    }
                }
            }
        }
    }
    Verdict {
        witness: None,
        checked,
    }
}

/// Every distinct quadruple at which the four-point condition fails.
pub fn four_point_violations<S: Scalar>(d: &DistanceMatrix<S>) -> Vec<[usize; 4]> {
    d.quadruples()
        .filter(|&q| !max_twice3(&d.pairing_sums(q)))
        .collect()
}

/// Whether `D(i,j) <= max(D(i,k), D(j,k))` for all triples, i.e. the maximum
/// of `(D(i,j), D(i,k), D(j,k))` is attained at least twice.
pub fn is_ultrametric<S: Scalar>(d: &DistanceMatrix<S>) -> Verdict<S> {
    let mut checked = 0;
    for t in subsets(d.n(), 3) {
        checked += 1;
        let (i, j, k) = (t[0], t[1], t[2]);
        let vals = [
            d.get(i, j).clone(),
            d.get(i, k).clone(),
            d.get(j, k).clone(),
        ];
        if !max_twice3(&vals) {
            return Verdict {
                witness: Some(Witness {
                    context: vec![],
                    indices: t,
                    values: vals.to_vec(),
                }),
                checked,
            };
        }
    }
    Verdict {
        witness: None,
        checked,
    }
}

fn union(r: &[usize], extra: [usize; 2]) -> Vec<usize> {
    let mut v = r.to_vec();
    v.extend(extra);
    v.sort_unstable();
    v
}

/// Membership in the three-term tropical Grassmannian: for every
/// `(m-2)`-set `R` and distinct `i < j < k < l` outside `R`, the maximum of
/// `W(Rij)+W(Rkl)`, `W(Rik)+W(Rjl)`, `W(Ril)+W(Rjk)` is attained at least
/// twice. Vacuous (and passing, with `checked == 0`) when `n < m + 2`.
pub fn in_tmn<S: Scalar>(w: &DissimTensor<S>) -> Verdict<S> {
    let (n, m) = (w.n(), w.m());
    if n < m + 2 {
        return Verdict {
            witness: None,
            checked: 0,
        };
    }
    let rs: Vec<Vec<usize>> = subsets(n, m - 2).collect();
    let per_r: Vec<(usize, Option<Witness<S>>)> = rs
        .par_iter()
        .map(|r| {
            let rest: Vec<usize> = (1..=n).filter(|x| r.binary_search(x).is_err()).collect();
            let mut checked = 0;
            for q in subsets(rest.len(), 4) {
                checked += 1;
                let [i, j, k, l] = [
                    rest[q[0] - 1],
                    rest[q[1] - 1],
                    rest[q[2] - 1],
                    rest[q[3] - 1],
                ];
                let e = |a, b| w.get(&union(r, [a, b])).clone();
                let sums = [e(i, j) + e(k, l), e(i, k) + e(j, l), e(i, l) + e(j, k)];
                if !max_twice3(&sums) {
                    let witness = Witness {
                        context: r.clone(),
                        indices: vec![i, j, k, l],
                        values: sums.to_vec(),
                    };
                    return (checked, Some(witness));
                }
            }
            (checked, None)
        })
        .collect();
    let mut checked = 0;
    for (c, wit) in per_r {
        checked += c;
        if wit.is_some() {
            return Verdict {
                witness: wit,
                checked,
            };
        }
    }
    Verdict {
        witness: None,
        checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::fixtures::quartet;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn same_triples_pair() -> (DistanceMatrix<Rational>, DistanceMatrix<Rational>) {
        let d = DistanceMatrix::from_fn(5, |_, _| q(1));
        let mut dp = d.clone();
        dp.set(4, 5, q(2));
        (d, dp)
    }

    #[test]
    fn max_twice_examples() {
        assert!(max_twice(&[3, 3, 1]).unwrap());
        assert!(!max_twice(&[3, 2, 1]).unwrap());
        assert!(max_twice(&[5, 5, 5]).unwrap());
        assert!(max_twice::<i32>(&[]).is_err());
    }

    #[test]
    fn plucker_at_quartet() {
        let d = quartet().distance_matrix();
        let point: BTreeMap<(usize, usize), Rational> =
            d.pairs().map(|(i, j, v)| ((i, j), v.clone())).collect();
        let (value, argmax) = eval_trop_poly(&plucker_quadric(1, 2, 3, 4), &point).unwrap();
        assert_eq!(value, q(6));
        assert_eq!(argmax, vec![1, 2]);
    }

    #[test]
    fn trop_poly_edge_cases() {
        let zero: BTreeMap<usize, Rational> = [(0, q(0)), (1, q(0))].into();
        let terms = vec![
            TropTerm::new(q(0), [(0, 2)]),
            TropTerm::new(q(0), [(1, 1)]),
            TropTerm::new(q(0), [(0, 1), (1, 3)]),
        ];
        assert_eq!(
            eval_trop_poly(&terms, &zero).unwrap(),
            (q(0), vec![0, 1, 2])
        );
        let single = vec![TropTerm::new(q(7), [(0, 1)])];
        assert_eq!(eval_trop_poly(&single, &zero).unwrap().1, vec![0]);
        let missing = vec![TropTerm::new(q(0), [(5, 1)])];
        assert!(eval_trop_poly(&missing, &zero).is_err());
        assert!(eval_trop_poly::<usize, Rational>(&[], &zero).is_err());
    }

    #[test]
    fn four_point_examples() {
        assert!(four_point_check(&quartet().distance_matrix(), false).passed());
        let (d, dp) = same_triples_pair();
        assert!(four_point_check(&d, false).passed());
        let v = four_point_check(&dp, false);
        let w = v.witness.unwrap();
        assert_eq!(w.indices, vec![1, 2, 4, 5]);
        assert_eq!(w.values, vec![q(3), q(2), q(2)]);
        assert_eq!(
            four_point_check(&dp, true).witness.unwrap().indices,
            vec![1, 2, 4, 5]
        );
        assert_eq!(
            four_point_violations(&dp),
            vec![[1, 2, 4, 5], [1, 3, 4, 5], [2, 3, 4, 5]]
        );
    }

    #[test]
    fn non_strict_catches_triangle_and_sign() {
        let mut d = DistanceMatrix::from_fn(4, |_, _| q(1));
        d.set(1, 2, q(5));
        // D(1,2) = 5 > D(1,3) + D(3,2) = 2
        let v = four_point_check(&d, false);
        assert!(!v.passed());
        assert_eq!(v.witness.unwrap().indices, vec![1, 2, 3, 3]);

        let neg = DistanceMatrix::from_fn(2, |_, _| q(-1));
        assert!(!four_point_check(&neg, false).passed());
        assert!(four_point_check(&neg, true).is_vacuous());
    }

    #[test]
    fn ultrametric_examples() {
        let mut d = DistanceMatrix::from_fn(3, |_, _| q(4));
        d.set(1, 2, q(2));
        assert!(is_ultrametric(&d).passed());
        assert!(is_ultrametric(&quartet().distance_matrix()).passed());
        let mut bad = DistanceMatrix::zeros(3);
        bad.set(1, 2, q(1));
        bad.set(1, 3, q(2));
        bad.set(2, 3, q(3));
        let w = is_ultrametric(&bad).witness.unwrap();
        assert_eq!(w.indices, vec![1, 2, 3]);
    }

    #[test]
    fn tmn_vacuous_below_m_plus_2() {
        let w = DissimTensor::<Rational>::zeros(4, 3).unwrap();
        let v = in_tmn(&w);
        assert!(v.passed() && v.is_vacuous());
    }

    #[test]
    fn witness_display() {
        let (_, dp) = same_triples_pair();
        let w = four_point_check(&dp, true).witness.unwrap();
        assert_eq!(w.to_string(), "{1,2,4,5}: (3, 2, 2)");
    }
}
