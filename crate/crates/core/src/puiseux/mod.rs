//! Finite Puiseux polynomials: finite sums `sum c_q t^q` with rational
//! exponents and coefficients, and the 3-minor certificate built on them.

mod certificate;

pub use certificate::{
    build_certificate, build_certificate_with_labels, verify_certificate, CertEdge, Certificate3,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// `terms` holds `(exponent, coefficient)` with strictly increasing
/// exponents and no zero coefficients; the empty list is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuiseuxPoly<S> {
    terms: Vec<(S, S)>,
}

impl<S: Scalar> PuiseuxPoly<S> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, S::zero())
    }

    /// `c t^q`.
    pub fn monomial(c: S, q: S) -> Self {
        Self::from_terms([(q, c)])
    }

    /// Collects `(exponent, coefficient)` pairs in any order, merging equal
    /// exponents and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (S, S)>) -> Self {
        let mut v: Vec<(S, S)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(S, S)> = Vec::with_capacity(v.len());
        for (q, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == q => last.1 += &c,
                _ => out.push((q, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(S, S)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient; `None` stands for `+inf`.
    pub fn val(&self) -> Option<&S> {
        self.terms.first().map(|t| &t.0)
    }

    /// Largest exponent with a nonzero coefficient; `None` stands for `-inf`.
    pub fn deg(&self) -> Option<&S> {
        self.terms.last().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&S> {
        self.terms.last().map(|t| &t.1)
    }

    /// Applies `q -> f(q)` to every exponent. `f` must be injective.
    pub fn map_exponents(&self, mut f: impl FnMut(&S) -> S) -> Self {
        Self::from_terms(self.terms.iter().map(|(q, c)| (f(q), c.clone())))
    }

    /// The substitution `t -> t^r`, done on exponents.
    pub fn substitute_power(&self, r: &S) -> Self {
        assert!(!r.is_zero(), "t -> t^0 is not a substitution");
        self.map_exponents(|q| q.clone() * r.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(q, a)| (q.clone(), a.clone() * c.clone())),
        )
    }
}

impl<S: Scalar> Add for &PuiseuxPoly<S> {
    type Output = PuiseuxPoly<S>;
    fn add(self, rhs: Self) -> PuiseuxPoly<S> {
        PuiseuxPoly::from_terms(self.terms.iter().chain(&rhs.terms).cloned())
    }
}

impl<S: Scalar> Neg for &PuiseuxPoly<S> {
    type Output = PuiseuxPoly<S>;
    fn neg(self) -> PuiseuxPoly<S> {
        PuiseuxPoly {
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &PuiseuxPoly<S> {
    type Output = PuiseuxPoly<S>;
    fn sub(self, rhs: Self) -> PuiseuxPoly<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &PuiseuxPoly<S> {
    type Output = PuiseuxPoly<S>;
    fn mul(self, rhs: Self) -> PuiseuxPoly<S> {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.push((p.clone() + q.clone(), a.clone() * b.clone()));
            }
        }
        PuiseuxPoly::from_terms(out)
    }
}

macro_rules! owned_op {
    ($tr:ident, $f:ident) => {
        impl<S: Scalar> $tr for PuiseuxPoly<S> {
            type Output = PuiseuxPoly<S>;
            fn $f(self, rhs: Self) -> PuiseuxPoly<S> {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl<S: Scalar> fmt::Display for PuiseuxPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (q, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = abs.is_one();
            if q.is_zero() {
                write!(f, "{abs}")?;
                continue;
            }
            if !unit {
                write!(f, "{abs}")?;
            }
            if q.is_one() {
                write!(f, "t")?;
            } else if q.is_integral() && !q.is_negative() {
                write!(f, "t^{q}")?;
            } else {
                write!(f, "t^({q})")?;
            }
        }
        Ok(())
    }
}

/// Determinant of a 3x3 matrix by cofactor expansion along the first row.
pub fn det3<S: Scalar>(m: &[[PuiseuxPoly<S>; 3]; 3]) -> PuiseuxPoly<S> {
    let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
    let t0 = &m[0][0] * &minor(1, 2);
    let t1 = &m[0][1] * &minor(0, 2);
    let t2 = &m[0][2] * &minor(0, 1);
    &(&t0 - &t1) + &t2
}
