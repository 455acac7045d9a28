//! Truncated power series with arbitrary-precision integer coefficients.
//!
//! A [`TruncatedIntSeries`] of order `N` stores the coefficients of degree
//! `0..=N`; everything above `N` is unknown rather than zero. Binary
//! operations produce a result whose order is the minimum of the operand
//! orders, so truncation never happens implicitly beyond that rule.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedIntSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedIntSeries {
    /// The zero series known up to degree `order`.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    /// `z^degree` known up to `order`; degrees above `order` are dropped.
    pub fn monomial(degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = BigInt::one();
        }
        s
    }

    /// Builds a series from its leading coefficients, padding with zeros up
    /// to `order` and discarding anything above it.
    pub fn from_coeffs<I, T>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut out: Vec<BigInt> = coeffs.into_iter().take(order + 1).map(Into::into).collect();
        out.resize(order + 1, BigInt::zero());
        Self { coeffs: out }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^k`, or `None` when `k` is beyond the known order.
    pub fn coeff(&self, k: usize) -> Option<&BigInt> {
        self.coeffs.get(k)
    }

    /// Drops every coefficient above `order` (no-op if already shorter).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: self.coeffs[..=order]
                .iter()
                .zip(&other.coeffs[..=order])
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Truncated Cauchy product, order `min(order(a), order(b))`.
    pub fn mul(&self, other: &Self) -> Self {
        if core::ptr::eq(self, other) {
            return self.square();
        }
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// `self * self`, using the symmetry of the convolution to halve the
    /// number of coefficient products.
    pub fn square(&self) -> Self {
        let order = self.order();
        let c = &self.coeffs;
        let mut out = vec![BigInt::zero(); order + 1];
        for (n, slot) in out.iter_mut().enumerate() {
            let mut cross = BigInt::zero();
            // pairs i < n - i
            for i in 0..n.div_ceil(2) {
                let (a, b) = (&c[i], &c[n - i]);
                if !a.is_zero() && !b.is_zero() {
                    cross += a * b;
                }
            }
            cross <<= 1u32;
            if n % 2 == 0 {
                let m = &c[n / 2];
                if !m.is_zero() {
                    cross += m * m;
                }
            }
            *slot = cross;
        }
        Self { coeffs: out }
    }

    /// The Pólya substitution `a(z) -> a(z^2)`, keeping the order of `a`.
    pub fn polya_substitute(&self) -> Self {
        let order = self.order();
        let mut out = vec![BigInt::zero(); order + 1];
        for (k, c) in self.coeffs.iter().enumerate().take(order / 2 + 1) {
            out[2 * k] = c.clone();
        }
        Self { coeffs: out }
    }

    /// Exact coefficientwise halving. Fails on the first odd coefficient.
    pub fn half(&self) -> Result<Self, Error> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (index, c) in self.coeffs.iter().enumerate() {
            if c.is_odd() {
                return Err(Error::OddCoefficient { index });
            }
            out.push(c >> 1u32);
        }
        Ok(Self { coeffs: out })
    }
}

impl Add for &TruncatedIntSeries {
    type Output = TruncatedIntSeries;

    fn add(self, rhs: Self) -> TruncatedIntSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedIntSeries {
    type Output = TruncatedIntSeries;

    fn sub(self, rhs: Self) -> TruncatedIntSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncatedIntSeries {
    type Output = TruncatedIntSeries;

    fn neg(self) -> TruncatedIntSeries {
        TruncatedIntSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncatedIntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Coefficientwise sum, truncated to the smaller order.
pub fn series_add(a: &TruncatedIntSeries, b: &TruncatedIntSeries) -> TruncatedIntSeries {
    a + b
}

pub fn series_mul(a: &TruncatedIntSeries, b: &TruncatedIntSeries) -> TruncatedIntSeries {
    a.mul(b)
}

pub fn polya_substitute(a: &TruncatedIntSeries) -> TruncatedIntSeries {
    a.polya_substitute()
}

pub fn half_of(a: &TruncatedIntSeries) -> Result<TruncatedIntSeries, Error> {
    a.half()
}
