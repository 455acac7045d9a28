//! Exact counts of non-plane binary trees by size and by bounded height.
//!
//! Sizes count external nodes, heights count edges. The total counts come
//! from `y = z + y^2/2 + y(z^2)/2`; the height-bounded generating functions
//! from `y_{h+1} = z + y_h^2/2 + y_h(z^2)/2` with `y_0 = z`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::Error;
use crate::series::TruncatedIntSeries;
use crate::tree::Tree;

/// Wedderburn–Etherington numbers `y_1..y_{n_max}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    // counts[0] is a placeholder so that counts[n] = y_n
    counts: Vec<BigUint>,
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }

    /// `y_n`, or `None` outside `1..=n_max`.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        if n == 0 {
            None
        } else {
            self.counts.get(n)
        }
    }

    /// `y_1..=y_{n_max}` in order.
    pub fn as_slice(&self) -> &[BigUint] {
        &self.counts[1..]
    }

    /// Natural log of `y_n`, accurate to double precision even when `y_n`
    /// overflows `f64`.
    pub fn ln(&self, n: usize) -> Option<f64> {
        self.get(n).map(ln_biguint)
    }
}

/// `y_n` for `1 <= n <= n_max`, by coefficient extraction from the basic
/// functional equation. `n_max = 0` yields an empty table.
pub fn count_trees(n_max: usize) -> CountTable {
    let mut counts: Vec<BigUint> = vec![BigUint::zero(); n_max + 1];
    for n in 1..=n_max {
        counts[n] = if n == 1 {
            BigUint::one()
        } else {
            split_total(&counts, n)
        };
    }
    CountTable { counts }
}

// sum over unordered splits {k, n-k}; identical to [z^n] (y^2 + y(z^2)) / 2
fn split_total(counts: &[BigUint], n: usize) -> BigUint {
    let mut total = BigUint::zero();
    for k in 1..n.div_ceil(2) {
        total += &counts[k] * &counts[n - k];
    }
    if n % 2 == 0 {
        let m = &counts[n / 2];
        total += (m * m + m) >> 1u32;
    }
    total
}

/// Exact counts `y_{h,n}` of trees of size `n` and height at most `h`.
///
/// Only the requested columns (sizes) are retained. Column `n` stores
/// heights `0..=min(h_max, n-1)`; larger heights are saturated at `y_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCountTable {
    n_max: usize,
    h_max: usize,
    columns: BTreeMap<usize, Vec<BigUint>>,
}

impl HeightCountTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    /// Sizes whose columns are stored.
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.columns.keys().copied()
    }

    pub fn has_column(&self, n: usize) -> bool {
        self.columns.contains_key(&n)
    }

    /// `y_{h,n}`, or `None` when column `n` is not stored or `h > h_max`.
    pub fn get(&self, h: usize, n: usize) -> Option<&BigUint> {
        if h > self.h_max {
            return None;
        }
        let col = self.columns.get(&n)?;
        col.get(h).or_else(|| col.last())
    }

    /// Stored entries of column `n` (heights `0..=min(h_max, n-1)`).
    pub fn column(&self, n: usize) -> Option<&[BigUint]> {
        self.columns.get(&n).map(Vec::as_slice)
    }
}

/// Full table `y_{h,n}` for `1 <= n <= n_max`, `0 <= h <= h_max`.
pub fn height_bounded_counts(n_max: usize, h_max: usize) -> Result<HeightCountTable, Error> {
    let sizes: Vec<usize> = (1..=n_max).collect();
    height_bounded_columns(&sizes, h_max)
}

/// Table restricted to the given sizes. The recurrence runs to order
/// `max(sizes)`, keeping one generating function in memory at a time.
pub fn height_bounded_columns(sizes: &[usize], h_max: usize) -> Result<HeightCountTable, Error> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidArgument("sizes must be nonempty and >= 1"));
    }
    let wanted: BTreeSet<usize> = sizes.iter().copied().collect();
    let order = *wanted.iter().next_back().expect("nonempty");
    let mut columns: BTreeMap<usize, Vec<BigUint>> =
        wanted.iter().map(|&n| (n, Vec::with_capacity(h_max.min(n - 1) + 1))).collect();

    let z = TruncatedIntSeries::monomial(1, order);
    let mut y_h = z.clone();
    let last_h = h_max.min(order - 1);
    for h in 0..=last_h {
        for (&n, col) in columns.iter_mut() {
            if h < n && h <= h_max {
                col.push(to_biguint(&y_h.coeffs()[n]));
            }
        }
        if h == last_h {
            break;
        }
        let doubled = &y_h.square() + &y_h.polya_substitute();
        y_h = &z + &doubled.half()?;
    }
    Ok(HeightCountTable {
        n_max: order,
        h_max,
        columns,
    })
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("tree counts are nonnegative")
}

/// Counts `e_{h,n} = y_n - y_{h,n}` of trees whose height exceeds `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceedanceTable {
    h_max: usize,
    columns: BTreeMap<usize, Vec<BigUint>>,
}

impl ExceedanceTable {
    /// `e_{h,n}`; zero for `h >= n - 1`.
    pub fn get(&self, h: usize, n: usize) -> Option<BigUint> {
        if h > self.h_max {
            return None;
        }
        let col = self.columns.get(&n)?;
        Some(col.get(h).cloned().unwrap_or_default())
    }
}

pub fn exceedance_counts(
    table: &HeightCountTable,
    counts: &CountTable,
) -> Result<ExceedanceTable, Error> {
    if table.n_max() > counts.n_max() {
        return Err(Error::InsufficientTable {
            needed_n: table.n_max(),
            needed_h: 0,
        });
    }
    let columns = table
        .columns
        .iter()
        .map(|(&n, col)| {
            let y_n = counts.get(n).expect("checked above");
            (n, col.iter().map(|y_hn| y_n - y_hn).collect())
        })
        .collect();
    Ok(ExceedanceTable {
        h_max: table.h_max(),
        columns,
    })
}

/// Exact law of the height of a uniform tree of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightDistribution {
    n: usize,
    total: BigUint,
    // point masses y_{h,n} - y_{h-1,n}, h = 0..n-1
    masses: Vec<BigUint>,
}

impl HeightDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `y_n`, the common denominator.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Number of trees of size `n` with height exactly `h`.
    pub fn mass(&self, h: usize) -> BigUint {
        self.masses.get(h).cloned().unwrap_or_default()
    }

    /// `P(H_n = h)` as a reduced fraction.
    pub fn prob(&self, h: usize) -> BigRational {
        ratio(self.mass(h), &self.total)
    }

    /// All point probabilities `P(H_n = h)`, `h = 0..n-1`.
    pub fn probs(&self) -> Vec<BigRational> {
        (0..self.masses.len()).map(|h| self.prob(h)).collect()
    }

    /// Number of trees with height at least `h`.
    pub fn tail_count(&self, h: usize) -> BigUint {
        self.masses.iter().skip(h).sum()
    }

    /// `P(H_n >= h)` exactly.
    pub fn tail(&self, h: usize) -> BigRational {
        ratio(self.tail_count(h), &self.total)
    }

    pub fn prob_f64(&self, h: usize) -> f64 {
        ratio_f64(&self.mass(h), &self.total)
    }

    pub fn tail_f64(&self, h: usize) -> f64 {
        ratio_f64(&self.tail_count(h), &self.total)
    }

    pub fn max_height(&self) -> usize {
        self.masses.len() - 1
    }
}

fn ratio(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den.clone()),
    )
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `num / den` rounded to double precision, without overflow for huge operands.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // scale so the quotient carries at least 64 significant bits
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        (num >> (-shift) as u64) / den
    };
    let qf = q.to_f64().expect("about 64 bits");
    qf * libm::exp2(-(shift as f64))
}

pub fn height_distribution(n: usize, table: &HeightCountTable) -> Result<HeightDistribution, Error> {
    let insufficient = Error::InsufficientTable {
        needed_n: n,
        needed_h: n.saturating_sub(1),
    };
    if n == 0 {
        return Err(Error::InvalidArgument("size must be >= 1"));
    }
    let col = table.column(n).ok_or(insufficient.clone())?;
    if col.len() < n {
        // heights up to n - 1 are needed to reach saturation
        return Err(insufficient);
    }
    let mut masses = Vec::with_capacity(n);
    let mut prev = BigUint::zero();
    for y_hn in col {
        masses.push(y_hn - &prev);
        prev = y_hn.clone();
    }
    Ok(HeightDistribution {
        n,
        total: prev,
        masses,
    })
}

/// `E[H_n^r]` as an exact rational.
pub fn exact_moment(dist: &HeightDistribution, r: u32) -> BigRational {
    let mut acc = BigUint::zero();
    for (h, m) in dist.masses.iter().enumerate() {
        if (h > 0 || r == 0) && !m.is_zero() {
            acc += m * Pow::pow(BigUint::from(h), r);
        }
    }
    ratio(acc, &dist.total)
}

/// Largest size accepted by [`brute_force_enumerate`].
pub const BRUTE_FORCE_LIMIT: usize = 14;

/// Every distinct non-plane tree of one size, found exhaustively.
#[derive(Clone, Debug)]
pub struct BruteForce {
    n: usize,
    trees: Vec<Tree>,
}

impl BruteForce {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct trees in canonical order.
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Number of distinct trees of each height `0..n`.
    pub fn height_counts(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.n.max(1)];
        for t in &self.trees {
            out[t.height()] += 1;
        }
        out
    }

    /// Number of distinct trees with height at most `h`.
    pub fn count_at_most(&self, h: usize) -> u64 {
        self.trees.iter().filter(|t| t.height() <= h).count() as u64
    }
}

/// Enumerates all plane binary trees with `n` leaves, canonicalises each one
/// and removes duplicates.
pub fn brute_force_enumerate(n: usize) -> Result<BruteForce, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("size must be >= 1"));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let by_size = plane_trees(n);
    let mut seen = BTreeSet::new();
    for &code in &by_size[n] {
        seen.insert(canonicalize(code, 2 * n - 1));
    }
    Ok(BruteForce {
        n,
        trees: seen.into_iter().collect(),
    })
}

// Plane trees as preorder bit strings: 1 = internal node, 0 = leaf.
// A tree with k leaves uses 2k - 1 bits, at most 27 for the guard.
fn plane_trees(n: usize) -> Vec<Vec<u32>> {
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    by_size[1].push(0);
    for size in 2..=n {
        let mut acc = Vec::new();
        for k in 1..size {
            let lb = 2 * (size - k) - 1;
            for &a in &by_size[k] {
                for &b in &by_size[size - k] {
                    let len = 2 * size - 1;
                    acc.push((1u32 << (len - 1)) | (a << lb) | b);
                }
            }
        }
        by_size[size] = acc;
    }
    by_size
}

fn canonicalize(code: u32, len: usize) -> Tree {
    fn parse(code: u32, len: usize, pos: &mut usize) -> Tree {
        let bit = (code >> (len - 1 - *pos)) & 1;
        *pos += 1;
        if bit == 0 {
            Tree::leaf()
        } else {
            let a = parse(code, len, pos);
            let b = parse(code, len, pos);
            Tree::join(a, b)
        }
    }
    let mut pos = 0;
    let t = parse(code, len, &mut pos);
    debug_assert_eq!(pos, len);
    t
}
