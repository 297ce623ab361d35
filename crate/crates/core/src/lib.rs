//! Exact computation with m-dissimilarity maps of weighted trees.
//!
//! The crate is generic over an exact [`Scalar`]; every rational type
//! `num_rational::Ratio<T>` qualifies. [`Rational`] (arbitrary precision) is
//! the default used by the command-line tool, and [`Rational64`] trades
//! overflow safety for speed.

pub mod dissim;
pub mod error;
pub mod formats;
pub mod matrix;
pub mod puiseux;
pub mod scalar;
pub mod subsets;
pub mod trees;
pub mod tropical;

pub use dissim::DissimTensor;
pub use error::{Error, NewickError, NewickErrorKind, Result};
pub use matrix::DistanceMatrix;
pub use scalar::{format_exact, Scalar};
pub use trees::WeightedTree;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// Rationals over `i64`; arithmetic panics on overflow.
pub type Rational64 = num_rational::Ratio<i64>;

pub type Tree = WeightedTree<Rational>;
pub type Matrix = DistanceMatrix<Rational>;
pub type Tensor = DissimTensor<Rational>;
