//! Exact Gaussian elimination over the scalar field.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolve<S> {
    pub rank: usize,
    /// A particular solution with every free variable set to zero. Only
    /// meaningful when `consistent` holds.
    pub solution: Vec<S>,
    /// Rows of the input chosen as pivots, in elimination order.
    pub pivot_rows: Vec<usize>,
    pub consistent: bool,
}

/// Solves `a x = b` exactly. `a` is row-major with equal-length rows.
pub fn solve_exact<S: Scalar>(a: &[Vec<S>], b: &[S]) -> LinearSolve<S> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut r = r.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut origin: Vec<usize> = (0..rows).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        origin.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &(f.clone() * p.clone());
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let consistent = m[r..].iter().all(|row| row[cols].is_zero());
    let mut solution = vec![S::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        solution[c] = m[i][cols].clone();
    }
    LinearSolve {
        rank: r,
        solution,
        pivot_rows: origin[..r].to_vec(),
        consistent,
    }
}
