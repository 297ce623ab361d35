//! Turning a tree metric into one that is ultrametric away from leaf `n`.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::tropical::{four_point_check, is_ultrametric};

/// `D'(i,j) = 2E + D(i,j) - D(i,n) - D(j,n)`, so `D'(i,n) = 2E`.
///
/// Geometrically this lengthens each pendant edge so that every leaf sits
/// at distance `E` from the point where leaf `n` was attached. Requires a
/// tree metric and `E >= max_i D(i,n)`.
pub fn reroot_ultrametric<S: Scalar>(d: &DistanceMatrix<S>, e: &S) -> Result<DistanceMatrix<S>> {
    let n = d.n();
    if let Some(w) = four_point_check(d, false).witness {
        return Err(Error::Violation {
            what: "input is not a tree metric".into(),
            witness: w.to_string(),
        });
    }
    let far = (1..n)
        .map(|i| d.get(i, n).clone())
        .max()
        .unwrap_or_else(S::zero);
    if *e < far {
        return Err(Error::Precondition(format!(
            "E = {e} is below max_i D(i,{n}) = {far}"
        )));
    }
    let two_e = e.clone() * S::two();
    let out = DistanceMatrix::from_fn(n, |i, j| {
        two_e.clone() + d.get(i, j).clone() - d.get(i, n).clone() - d.get(j, n).clone()
    });
    assert!(
        four_point_check(&out, false).passed(),
        "rerooted matrix is a tree metric"
    );
    if n >= 3 {
        let head: Vec<usize> = (1..n).collect();
        assert!(
            is_ultrametric(&out.restrict(&head)).passed(),
            "rerooted matrix is ultrametric off leaf n"
        );
    }
    Ok(out)
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
    fn quartet_at_max() {
        let d = quartet().distance_matrix();
        let r = reroot_ultrametric(&d, &q(3)).unwrap();
        assert_eq!(
            (r.get(1, 2), r.get(1, 3), r.get(2, 3)),
            (&q(2), &q(4), &q(4))
        );
        assert!((1..4).all(|i| *r.get(i, 4) == q(6)));
    }

    #[test]
    fn star_all_ones() {
        let d = star(5, Rational::from_frac(1, 2)).distance_matrix();
        let r = reroot_ultrametric(&d, &q(1)).unwrap();
        for (i, j, v) in r.pairs() {
            assert_eq!(*v, if j == 5 { q(2) } else { q(1) }, "({i},{j})");
        }
    }

    #[test]
    fn larger_e_is_legal() {
        let d = quartet().distance_matrix();
        let r = reroot_ultrametric(&d, &q(10)).unwrap();
        assert_eq!(*r.get(1, 2), q(16));
    }

    #[test]
    fn rejects_small_e_and_non_metrics() {
        let d = quartet().distance_matrix();
        assert!(matches!(
            reroot_ultrametric(&d, &q(2)),
            Err(Error::Precondition(_))
        ));
        let mut bad = DistanceMatrix::from_fn(5, |_, _| q(1));
        bad.set(4, 5, q(2));
        assert!(matches!(
            reroot_ultrametric(&bad, &q(5)),
            Err(Error::Violation { .. })
        ));
    }
}
