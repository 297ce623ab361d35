//! Pairing coordinates for 4-dissimilarity maps.
//!
//! `pi4` sends a matrix `X` to the point with coordinates
//! `X(i,j;k,l) = (X(i,j) + X(k,l) + min(X(i,k) + X(j,l), X(i,l) + X(j,k))) / 2`.
//! `L` is the subspace where all six coordinates of each quadruple agree,
//! and `p_project` reads the common value off as a 4-dissimilarity map.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::subsets::subsets;
use crate::tropical::{max_twice, Verdict, Witness};

use super::DissimTensor;

/// Ordered pair of disjoint unordered pairs, each stored increasing.
pub type PairingKey = ((usize, usize), (usize, usize));

/// The six coordinates of `{i<j<k<l}` in the order
/// `(ij;kl), (ik;jl), (il;jk), (jl;ik), (jk;il), (kl;ij)`.
fn chain([i, j, k, l]: [usize; 4]) -> [PairingKey; 6] {
    [
        ((i, j), (k, l)),
        ((i, k), (j, l)),
        ((i, l), (j, k)),
        ((j, l), (i, k)),
        ((j, k), (i, l)),
        ((k, l), (i, j)),
    ]
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiPoint<S> {
    n: usize,
    entries: BTreeMap<PairingKey, S>,
}

impl<S: Scalar> PiPoint<S> {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::OutOfRange(format!(
                "pairing coordinates need n >= 4, got {n}"
            )));
        }
        let mut entries = BTreeMap::new();
        for q in subsets(n, 4) {
            for key in chain([q[0], q[1], q[2], q[3]]) {
                entries.insert(key, S::zero());
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `X(a,b;c,d)`; the order inside each pair does not matter.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&S> {
        self.entries.get(&(sorted_pair(a, b), sorted_pair(c, d)))
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: S) -> Result<()> {
        let key = (sorted_pair(a, b), sorted_pair(c, d));
        match self.entries.get_mut(&key) {
            Some(slot) => {
                *slot = v;
                Ok(())
            }
            None => Err(Error::OutOfRange(format!(
                "({a},{b};{c},{d}) is not a coordinate for n = {}",
                self.n
            ))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PairingKey, &S)> {
        self.entries.iter()
    }

    /// The six coordinates of a sorted quadruple, in chain order.
    pub fn coordinates(&self, q: [usize; 4]) -> [S; 6] {
        chain(q).map(|k| self.entries[&k].clone())
    }
}

/// The pairing-coordinate image of `d`.
pub fn pi4<S: Scalar>(d: &DistanceMatrix<S>) -> Result<PiPoint<S>> {
    let mut p = PiPoint::zeros(d.n())?;
    let x = |a, b| d.get(a, b).clone();
    for (key, v) in p.entries.iter_mut() {
        let ((a, b), (c, e)) = *key;
        let cross = (x(a, c) + x(b, e)).min(x(a, e) + x(b, c));
        *v = (x(a, b) + x(c, e) + cross).half();
    }
    Ok(p)
}

fn quadruple_in_l<S: Scalar>(p: &PiPoint<S>, q: [usize; 4]) -> bool {
    let c = p.coordinates(q);
    c.iter().all(|v| *v == c[0])
}

/// Passes iff every quadruple's six coordinates coincide.
pub fn in_l<S: Scalar>(p: &PiPoint<S>) -> Verdict<S> {
    let mut checked = 0;
    for s in subsets(p.n(), 4) {
        checked += 1;
        let q = [s[0], s[1], s[2], s[3]];
        if !quadruple_in_l(p, q) {
            return Verdict {
                witness: Some(Witness {
                    context: vec![],
                    indices: s,
                    values: p.coordinates(q).to_vec(),
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

/// Every quadruple whose coordinates do not coincide.
pub fn l_violations<S: Scalar>(p: &PiPoint<S>) -> Vec<[usize; 4]> {
    subsets(p.n(), 4)
        .map(|s| [s[0], s[1], s[2], s[3]])
        .filter(|&q| !quadruple_in_l(p, q))
        .collect()
}

/// Reads off the common value per quadruple. Errors outside `L`.
pub fn p_project<S: Scalar>(p: &PiPoint<S>) -> Result<DissimTensor<S>> {
    if let Some(w) = in_l(p).witness {
        return Err(Error::Violation {
            what: "point is not in the coincidence subspace".into(),
            witness: w.to_string(),
        });
    }
    DissimTensor::from_fn(p.n(), 4, |s| {
        p.entries[&((s[0], s[1]), (s[2], s[3]))].clone()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleCheck<S> {
    pub quadruple: [usize; 4],
    /// `(a, b, c) = (X(i,j)+X(k,l), X(i,k)+X(j,l), X(i,l)+X(j,k))`.
    pub sums: [S; 3],
    pub max_twice: bool,
    /// `a + min(b,c) = b + min(a,c) = c + min(a,b)`.
    pub eqn_min: bool,
    /// All six pairing coordinates coincide.
    pub in_l: bool,
}

impl<S> QuadrupleCheck<S> {
    pub fn equivalent(&self) -> bool {
        self.max_twice == self.eqn_min && self.eqn_min == self.in_l
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M4Report<S> {
    pub rows: Vec<QuadrupleCheck<S>>,
}

impl<S> M4Report<S> {
    pub fn equivalence_holds(&self) -> bool {
        self.rows.iter().all(QuadrupleCheck::equivalent)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.max_twice && r.in_l)
    }
}

/// Per-quadruple comparison of the max-twice condition, the `min`
/// equalities and membership of `pi4(d)` in `L`.
pub fn verify_m4_characterization<S: Scalar>(d: &DistanceMatrix<S>) -> Result<M4Report<S>> {
    let p = pi4(d)?;
    let rows = d
        .quadruples()
        .map(|q| {
            let sums = d.pairing_sums(q);
            let [a, b, c] = sums.clone();
            let e1 = a.clone() + b.clone().min(c.clone());
            let e2 = b.clone() + a.clone().min(c.clone());
            let e3 = c + a.min(b);
            QuadrupleCheck {
                quadruple: q,
                max_twice: max_twice(&sums).expect("three values"),
                sums,
                eqn_min: e1 == e2 && e2 == e3,
                in_l: quadruple_in_l(&p, q),
            }
        })
        .collect();
    Ok(M4Report { rows })
}
