//! Recovering a dissimilarity matrix from its 3-dissimilarity map.
//!
//! The linear map `X -> W`, `W(i,j,k) = (X(i,j) + X(i,k) + X(j,k)) / 2`, is
//! injective for `n >= 5`. Summing the equations gives a closed form:
//! with `T(i,j) = sum_k W(i,j,k)`, `U(i) = sum_j T(i,j)` and `Sigma` the
//! total of `W`,
//!
//! ```text
//! P    = 2 Sigma / (n - 2)           (sum of all X)
//! R(i) = (U(i) - P) / (n - 3)        (row sum of X at i)
//! X(i,j) = (2 T(i,j) - R(i) - R(j)) / (n - 4)
//! ```
//!
//! Exact Gaussian elimination on the full system is kept as an independent
//! path and the two are compared in tests.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::subsets;
use crate::tropical::Witness;

use super::linalg::solve_exact;
use super::phi::phi_3;
use super::DissimTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InversionMethod {
    #[default]
    ClosedForm,
    Elimination,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseOutcome<S> {
    /// The unique preimage when `mismatch` is `None`. Otherwise whatever
    /// the method produced, which does not map back to the input.
    pub candidate: DistanceMatrix<S>,
    /// First triple (lexicographic) where the candidate's image differs from
    /// the input, with values `(input, image)`.
    pub mismatch: Option<Witness<S>>,
}

/// Coefficient matrix of the linear map: rows are triples and columns are
/// pairs, both in lexicographic order.
pub fn phi3_system<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    let pairs: Vec<Vec<usize>> = subsets(n, 2).collect();
    subsets(n, 3)
        .map(|t| {
            pairs
                .iter()
                .map(|p| {
                    if t.contains(&p[0]) && t.contains(&p[1]) {
                        S::one().half()
                    } else {
                        S::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn closed_form<S: Scalar>(w: &DissimTensor<S>) -> DistanceMatrix<S> {
    let n = w.n();
    let mut t = DistanceMatrix::<S>::zeros(n);
    let mut sigma = S::zero();
    for (s, v) in w.iter() {
        sigma += v;
        for (a, b) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
            let cur = t.get(a, b).clone() + v.clone();
            t.set(a, b, cur);
        }
    }
    let int = |v: usize| S::from_usize(v).expect("small integer");
    let p = sigma * int(2) / int(n - 2);
    let r: Vec<S> = (1..=n)
        .map(|i| {
            let mut u = S::zero();
            for j in (1..=n).filter(|&j| j != i) {
                u += t.get(i, j);
            }
            (u - p.clone()) / int(n - 3)
        })
        .collect();
    DistanceMatrix::from_fn(n, |i, j| {
        (t.get(i, j).clone() * int(2) - r[i - 1].clone() - r[j - 1].clone()) / int(n - 4)
    })
}

fn elimination<S: Scalar>(w: &DissimTensor<S>) -> DistanceMatrix<S> {
    let n = w.n();
    let a = phi3_system::<S>(n);
    let b: Vec<S> = subsets(n, 3).map(|t| w.get(&t).clone()).collect();
    let sol = solve_exact(&a, &b);
    let mut x = DistanceMatrix::zeros(n);
    for (p, v) in subsets(n, 2).zip(sol.solution) {
        x.set(p[0], p[1], v);
    }
    x
}

/// Inverts with the chosen method and reports whether the result maps back.
pub fn invert3_detailed<S: Scalar>(
    w: &DissimTensor<S>,
    method: InversionMethod,
) -> Result<InverseOutcome<S>> {
    if w.m() != 3 {
        return Err(Error::OutOfRange(format!(
            "expected a 3-dissimilarity map, got m = {}",
            w.m()
        )));
    }
    if w.n() <= 4 {
        return Err(Error::Precondition(format!(
            "the 3-dissimilarity map is not injective for n = {} (need n >= 5)",
            w.n()
        )));
    }
    let candidate = match method {
        InversionMethod::ClosedForm => closed_form(w),
        InversionMethod::Elimination => elimination(w),
    };
    let image = phi_3(&candidate)?;
    let mismatch = w.iter().find_map(|(s, v)| {
        let got = image.get(&s);
        (got != v).then(|| Witness {
            context: vec![],
            indices: s.clone(),
            values: vec![v.clone(), got.clone()],
        })
    });
    Ok(InverseOutcome {
        candidate,
        mismatch,
    })
}

/// The unique `X` with `phi_3(X) = W`, using the closed form. Errors with a
/// witness triple when `W` is not in the image.
pub fn invert3<S: Scalar>(w: &DissimTensor<S>) -> Result<DistanceMatrix<S>> {
    let out = invert3_detailed(w, InversionMethod::ClosedForm)?;
    match out.mismatch {
        None => Ok(out.candidate),
        Some(wit) => Err(Error::Violation {
            what: "not in the image of the 3-dissimilarity map".into(),
            witness: wit.to_string(),
        }),
    }
}
