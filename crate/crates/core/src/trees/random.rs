//! Seeded random trees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Edge, Topology, WeightedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shape {
    /// A random leaf order along a caterpillar.
    Caterpillar,
    /// Uniform over the `(2n - 5)!!` unrooted binary topologies.
    #[default]
    UniformTopology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSampler {
    /// Integers drawn uniformly from `min..=max`.
    Integers { min: i64, max: i64 },
    /// `p / q` with `p` uniform in `1..=max_num` and `q` in `1..=max_den`.
    Rationals { max_num: i64, max_den: i64 },
}

impl Default for WeightSampler {
    fn default() -> Self {
        WeightSampler::Rationals {
            max_num: 12,
            max_den: 4,
        }
    }
}

impl WeightSampler {
    pub fn sample<S: Scalar>(&self, rng: &mut impl Rng) -> S {
        match *self {
            WeightSampler::Integers { min, max } => S::from_int(rng.random_range(min..=max)),
            WeightSampler::Rationals { max_num, max_den } => {
                S::from_frac(rng.random_range(1..=max_num), rng.random_range(1..=max_den))
            }
        }
    }
}

/// A binary tree on `n >= 3` leaves, fully determined by `seed`.
///
/// The tree is unrooted. With the default sampler all weights are strictly
/// positive; `Integers { min: 0, .. }` may produce zero weights.
pub fn random_tree<S: Scalar>(
    n: usize,
    seed: u64,
    shape: Shape,
    weights: WeightSampler,
) -> Result<WeightedTree<S>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "random trees need n >= 3, got {n}"
        )));
    }
    if let WeightSampler::Integers { min, max } = weights {
        if min < 0 || min > max {
            return Err(Error::OutOfRange(format!("bad weight range {min}..={max}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match shape {
        Shape::UniformTopology => {
            let choices: Vec<usize> = (4..=n).map(|k| rng.random_range(0..2 * k - 5)).collect();
            let topo = Topology::from_insertions(n, &choices);
            Ok(topo.with_weights(|_| weights.sample(&mut rng)))
        }
        Shape::Caterpillar => {
            let mut order: Vec<usize> = (1..=n).collect();
            order.shuffle(&mut rng);
            // leaves are nodes 0..n, spine nodes n..2n-2
            let spine = |i: usize| n + i;
            let mut pairs = Vec::new();
            pairs.push((spine(0), order[0] - 1));
            for (i, &leaf) in order[1..n - 1].iter().enumerate() {
                pairs.push((spine(i.min(n - 3)), leaf - 1));
            }
            pairs.push((spine(n - 3), order[n - 1] - 1));
            for i in 0..n - 3 {
                pairs.push((spine(i), spine(i + 1)));
            }
            let edges = pairs
                .into_iter()
                .map(|(a, b)| Edge {
                    a,
                    b,
                    weight: weights.sample(&mut rng),
                })
                .collect();
            let leaves: Vec<_> = (1..=n).map(|l| (l, l - 1)).collect();
            WeightedTree::new(2 * n - 2, edges, &leaves, None)
        }
    }
}
