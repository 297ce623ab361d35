//! Deciding whether a 3-dissimilarity map comes from a tree.

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::trees::{reconstruct_tree, WeightedTree};
use crate::tropical::{four_point_check, in_tmn, max_twice, Witness};

use super::invert::{invert3_detailed, InversionMethod};
use super::DissimTensor;

#[derive(Debug, Clone)]
pub enum Membership3<S> {
    /// `W = phi_3(matrix)` with `matrix` satisfying the four-point
    /// condition on distinct quadruples. `tree` realizes `matrix` whenever
    /// it is a genuine tree metric (non-negative, triangle inequality).
    Yes {
        matrix: DistanceMatrix<S>,
        tree: Option<WeightedTree<S>>,
    },
    /// `W` is not the image of any dissimilarity matrix.
    NotInLinearImage {
        candidate: DistanceMatrix<S>,
        witness: Witness<S>,
    },
    /// The unique preimage fails the four-point condition at `quadruple`.
    /// `tmn_witness` is the matching failed three-term relation of `W`,
    /// taken with `R = {s}` for the smallest label `s` outside the quadruple.
    NotTreeMetric {
        matrix: DistanceMatrix<S>,
        quadruple: [usize; 4],
        tmn_witness: Witness<S>,
    },
}

impl<S> Membership3<S> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership3::Yes { .. })
    }
}

pub fn membership3<S: Scalar>(w: &DissimTensor<S>) -> Result<Membership3<S>> {
    if w.m() != 3 {
        return Err(Error::OutOfRange(format!(
            "expected a 3-dissimilarity map, got m = {}",
            w.m()
        )));
    }
    if w.n() < 5 {
        return Err(Error::Precondition(format!(
            "membership needs n >= 5, got n = {}",
            w.n()
        )));
    }
    let inv = invert3_detailed(w, InversionMethod::ClosedForm)?;
    if let Some(witness) = inv.mismatch {
        return Ok(Membership3::NotInLinearImage {
            candidate: inv.candidate,
            witness,
        });
    }
    let x = inv.candidate;
    if let Some(wit) = four_point_check(&x, true).witness {
        let quadruple: [usize; 4] = wit.indices.try_into().expect("four indices");
        let s = (1..=w.n())
            .find(|l| !quadruple.contains(l))
            .expect("n >= 5");
        let [i, j, k, l] = quadruple;
        let e = |a: usize, b: usize| w.value(&[s, a, b]).expect("valid labels");
        let sums = vec![e(i, j) + e(k, l), e(i, k) + e(j, l), e(i, l) + e(j, k)];
        debug_assert!(!max_twice(&sums).unwrap());
        return Ok(Membership3::NotTreeMetric {
            matrix: x,
            quadruple,
            tmn_witness: Witness {
                context: vec![s],
                indices: quadruple.to_vec(),
                values: sums,
            },
        });
    }
    debug_assert!(in_tmn(w).passed());
    let tree = if four_point_check(&x, false).passed() {
        Some(reconstruct_tree(&x)?)
    } else {
        None
    };
    Ok(Membership3::Yes { matrix: x, tree })
}
