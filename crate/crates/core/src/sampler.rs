//! Uniform random generation of non-plane binary trees of a fixed size by
//! the recursive method.
//!
//! A tree of size `n >= 2` is an unordered pair of subtrees with sizes
//! `{k, n-k}`, `k <= n-k`. Split `{k, n-k}` with `k < n-k` accounts for
//! `y_k y_{n-k}` trees; the balanced split accounts for `y_m (y_m + 1) / 2`
//! multisets, `m = n/2`. Drawing the split with these weights and then the
//! children uniformly gives the uniform law on trees of size `n`.

use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumeration::CountTable;
use crate::error::Error;
use crate::tree::Tree;

/// One unordered split `{small, large}` of a size and its tree count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub small: usize,
    pub large: usize,
    pub weight: BigUint,
}

/// Weights of all unordered splits of `n >= 2`; they sum to `y_n`.
pub fn split_weights(n: usize, counts: &CountTable) -> Result<Vec<Split>, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument("splits need n >= 2"));
    }
    let y = |k: usize| {
        counts.get(k).ok_or(Error::InsufficientTable {
            needed_n: n - 1,
            needed_h: 0,
        })
    };
    let mut out = Vec::with_capacity(n / 2);
    for small in 1..=n / 2 {
        let large = n - small;
        let weight = if small == large {
            let m = y(small)?;
            (m * m + m) >> 1u32
        } else {
            y(small)? * y(large)?
        };
        out.push(Split {
            small,
            large,
            weight,
        });
    }
    Ok(out)
}

/// Recursive-method sampler with split tables precomputed up to `n_max`.
pub struct TreeSampler<'a> {
    counts: &'a CountTable,
    splits: Vec<Vec<Split>>,
}

impl<'a> TreeSampler<'a> {
    pub fn new(n_max: usize, counts: &'a CountTable) -> Result<Self, Error> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("size must be >= 1"));
        }
        if counts.n_max() < n_max {
            // y_n itself is needed to draw the split of the root
            return Err(Error::InsufficientTable {
                needed_n: n_max,
                needed_h: 0,
            });
        }
        let mut splits = Vec::with_capacity(n_max + 1);
        splits.push(Vec::new());
        splits.push(Vec::new());
        for n in 2..=n_max {
            let s = split_weights(n, counts)?;
            debug_assert_eq!(
                s.iter().map(|w| &w.weight).sum::<BigUint>(),
                *counts.get(n).expect("checked")
            );
            splits.push(s);
        }
        Ok(Self { counts, splits })
    }

    pub fn n_max(&self) -> usize {
        self.splits.len() - 1
    }

    /// A uniformly random tree of size `n`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Tree, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument("size must be >= 1"));
        }
        if n > self.n_max() {
            return Err(Error::InsufficientTable {
                needed_n: n,
                needed_h: 0,
            });
        }
        Ok(self.draw(n, rng))
    }

    fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Tree {
        if n == 1 {
            return Tree::leaf();
        }
        let total = self.counts.get(n).expect("table covers n");
        let mut ticket = rng.gen_biguint_below(total);
        let splits = &self.splits[n];
        let mut chosen = splits.last().expect("n >= 2 has a split");
        for s in splits {
            if ticket < s.weight {
                chosen = s;
                break;
            }
            ticket -= &s.weight;
        }
        if chosen.small != chosen.large {
            let a = self.draw(chosen.small, rng);
            let b = self.draw(chosen.large, rng);
            return Tree::join(a, b);
        }
        // balanced split: uniform over the y(y+1)/2 multisets of two subtrees
        let m = chosen.small;
        let y = self.counts.get(m).expect("table covers m");
        let multisets = &chosen.weight;
        let pick = rng.gen_biguint_below(multisets);
        if &pick < y {
            let a = self.draw(m, rng);
            return Tree::join(a.clone(), a);
        }
        loop {
            let a = self.draw(m, rng);
            let b = self.draw(m, rng);
            if a != b {
                return Tree::join(a, b);
            }
        }
    }
}

/// One uniform tree of size `n` from a seeded ChaCha stream.
pub fn sample_tree(n: usize, counts: &CountTable, seed: u64) -> Result<Tree, Error> {
    let sampler = TreeSampler::new(n, counts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sampler.sample(n, &mut rng)
}

/// Height histogram and sample moments over repeated uniform draws.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightStats {
    pub n: usize,
    pub trials: u64,
    /// `histogram[h]` = number of draws with height `h`, `h = 0..n-1`.
    pub histogram: Vec<u64>,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single trial).
    pub variance: f64,
}

impl HeightStats {
    /// Standard error of the sample mean.
    pub fn std_error(&self) -> f64 {
        libm::sqrt(self.variance / self.trials as f64)
    }
}

/// Draws `trials` trees of size `n` from one ChaCha stream seeded by `seed`.
pub fn empirical_height_stats(
    n: usize,
    trials: u64,
    counts: &CountTable,
    seed: u64,
) -> Result<HeightStats, Error> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1"));
    }
    let sampler = TreeSampler::new(n, counts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram = alloc::vec![0u64; n];
    for _ in 0..trials {
        let t = sampler.sample(n, &mut rng)?;
        histogram[t.height()] += 1;
    }
    let tf = trials as f64;
    let mean = histogram
        .iter()
        .enumerate()
        .map(|(h, &c)| h as f64 * c as f64)
        .sum::<f64>()
        / tf;
    let ss: f64 = histogram
        .iter()
        .enumerate()
        .map(|(h, &c)| {
            let d = h as f64 - mean;
            d * d * c as f64
        })
        .sum();
    let variance = if trials > 1 { ss / (tf - 1.0) } else { 0.0 };
    Ok(HeightStats {
        n,
        trials,
        histogram,
        mean,
        variance,
    })
}

impl Split {
    pub fn is_balanced(&self) -> bool {
        self.small == self.large
    }
}
