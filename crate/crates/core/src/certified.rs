//! Closed intervals with dyadic endpoints and outward rounding.
//!
//! A [`CertifiedReal`] holds integers `lo <= hi` and a binary precision `p`;
//! the represented quantity is guaranteed to lie in `[lo / 2^p, hi / 2^p]`.
//! Every operation rounds the lower end down and the upper end up.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

// 60 correct decimals, truncated; the +1 ulp bracket below covers the rest
const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944";

#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl CertifiedReal {
    /// The interval `[lo, hi] * 2^-prec`.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        Self { lo, hi, prec }
    }

    pub fn exact_f64(x: f64, prec: u32) -> Self {
        Self {
            lo: scaled_floor(x, prec),
            hi: scaled_ceil(x, prec),
            prec,
        }
    }

    pub fn from_integer(v: i64, prec: u32) -> Self {
        let s = BigInt::from(v) << prec;
        Self {
            lo: s.clone(),
            hi: s,
            prec,
        }
    }

    /// Outward-rounded enclosure of `num / den`, `den > 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(den.is_positive());
        let scaled = num << prec;
        Self {
            lo: scaled.div_floor(den),
            hi: div_ceil(&scaled, den),
            prec,
        }
    }

    /// Enclosure of pi.
    pub fn pi(prec: u32) -> Self {
        let digits: BigInt = PI_DIGITS.parse().expect("digit string");
        let den = BigInt::from(10u32).pow((PI_DIGITS.len() - 1) as u32);
        let lo = Self::from_ratio(&digits, &den, prec);
        let hi = Self::from_ratio(&(digits + 1u32), &den, prec);
        Self::from_scaled(lo.lo, hi.hi, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    /// Midpoint rounded to the nearest double.
    pub fn value(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.prec + 1)
    }

    /// Half-width, rounded up to a double: the absolute error bound.
    pub fn err(&self) -> f64 {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            return 0.0;
        }
        scaled_to_f64(&w, self.prec + 1).next_up()
    }

    /// Lower endpoint rounded down to a double.
    pub fn lower(&self) -> f64 {
        let v = scaled_to_f64(&self.lo, self.prec);
        if self.cmp_scaled_lo(v) == Ordering::Greater {
            v.next_down()
        } else {
            v
        }
    }

    /// Upper endpoint rounded up to a double.
    pub fn upper(&self) -> f64 {
        let v = scaled_to_f64(&self.hi, self.prec);
        if scaled_ceil(v, self.prec) < self.hi {
            v.next_up()
        } else {
            v
        }
    }

    fn cmp_scaled_lo(&self, v: f64) -> Ordering {
        // compares v against the lower endpoint exactly
        let f = scaled_floor(v, self.prec);
        if f < self.lo {
            Ordering::Less
        } else if scaled_ceil(v, self.prec) > self.lo {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    /// Exact membership test for a double.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= scaled_floor(x, self.prec) && scaled_ceil(x, self.prec) <= self.hi
    }

    /// Whether two enclosures share a point.
    pub fn overlaps(&self, other: &Self) -> bool {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        a.lo <= b.hi && b.lo <= a.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Same enclosure at another precision, rounded outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                Self {
                    lo: &self.lo << s,
                    hi: &self.hi << s,
                    prec,
                }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                Self {
                    lo: &self.lo >> s,
                    hi: shr_ceil(&self.hi, s),
                    prec,
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        Self {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            prec: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        Self {
            lo: a.lo - b.hi,
            hi: a.hi - b.lo,
            prec: p,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Self {
            lo: min >> p,
            hi: shr_ceil(max, p),
            prec: p,
        }
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self {
            lo,
            hi,
            prec: self.prec,
        }
    }

    /// Quotient of intervals; `other` must be strictly positive.
    pub fn div(&self, other: &Self) -> Self {
        assert!(other.is_positive(), "divisor interval must be positive");
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        let lo_num = &a.lo << p;
        let hi_num = &a.hi << p;
        let lo = if a.lo.is_negative() {
            lo_num.div_floor(&b.lo)
        } else {
            lo_num.div_floor(&b.hi)
        };
        let hi = if a.hi.is_negative() {
            div_ceil(&hi_num, &b.hi)
        } else {
            div_ceil(&hi_num, &b.lo)
        };
        Self { lo, hi, prec: p }
    }

    /// Square root; negative parts of the interval are clamped to zero.
    pub fn sqrt(&self) -> Self {
        let clamp = |v: &BigInt| -> BigUint {
            if v.is_negative() {
                BigUint::zero()
            } else {
                v.magnitude() << self.prec
            }
        };
        let lo_arg = clamp(&self.lo);
        let hi_arg = clamp(&self.hi);
        let lo = lo_arg.sqrt();
        let mut hi = hi_arg.sqrt();
        if &hi * &hi < hi_arg {
            hi += 1u32;
        }
        Self {
            lo: BigInt::from_biguint(Sign::Plus, lo),
            hi: BigInt::from_biguint(Sign::Plus, hi),
            prec: self.prec,
        }
    }

    /// Midpoint in decimal with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let mid = &self.lo + &self.hi;
        let scaled = (mid * BigInt::from(10u32).pow(digits)) >> (self.prec + 1);
        let neg = scaled.is_negative();
        let mut s = alloc::format!("{}", scaled.abs());
        let d = digits as usize;
        if s.len() <= d {
            let pad = d + 1 - s.len();
            s.insert_str(0, &"0".repeat(pad));
        }
        if d > 0 {
            s.insert(s.len() - d, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        s
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:e}", self.value(), self.err())
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.to_decimal(20), self.err())
    }
}

fn div_ceil(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

pub(crate) fn shr_ceil(v: &BigInt, s: u32) -> BigInt {
    let floor = v >> s;
    if &floor << s == *v {
        floor
    } else {
        floor + 1
    }
}

/// Decomposes a finite double as `mantissa * 2^exp`.
fn decompose(x: f64) -> (BigInt, i32) {
    assert!(x.is_finite(), "non-finite value");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    (BigInt::from(m as i64) * sign, e)
}

/// `floor(x * 2^prec)`.
pub(crate) fn scaled_floor(x: f64, prec: u32) -> BigInt {
    let (m, e) = decompose(x);
    let shift = e + prec as i32;
    if shift >= 0 {
        m << shift as u32
    } else {
        m >> (-shift) as u32
    }
}

/// `ceil(x * 2^prec)`.
pub(crate) fn scaled_ceil(x: f64, prec: u32) -> BigInt {
    let (m, e) = decompose(x);
    let shift = e + prec as i32;
    if shift >= 0 {
        m << shift as u32
    } else {
        shr_ceil(&m, (-shift) as u32)
    }
}

/// `v / 2^prec` rounded to a double.
pub(crate) fn scaled_to_f64(v: &BigInt, prec: u32) -> f64 {
    let bits = v.bits();
    if bits <= 900 {
        return v.to_f64().expect("fits") * libm::exp2(-(prec as f64));
    }
    let drop = bits - 64;
    let top = (v >> drop).to_f64().expect("fits");
    top * libm::exp2(drop as f64 - prec as f64)
}

/// Decimal digits to working binary precision.
pub(crate) fn precision_for(tol: f64) -> u32 {
    let digits = libm::ceil(-libm::log10(tol)).max(1.0);
    // twice the decimal digits, converted to bits, plus guard bits
    (2.0 * digits * core::f64::consts::LOG2_10) as u32 + 64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_conversion_roundtrip() {
        let x = CertifiedReal::exact_f64(0.1, 128);
        assert!(x.contains(0.1));
        assert_eq!(x.err(), 0.0);
        assert_eq!(x.value(), 0.1);
        let coarse = CertifiedReal::exact_f64(0.1, 4);
        assert!(coarse.contains(0.1));
        assert!(coarse.lower() <= 0.1 && coarse.upper() >= 0.1);
    }

    #[test]
    fn arithmetic_encloses() {
        let p = 80;
        let a = CertifiedReal::exact_f64(1.0, p).div(&CertifiedReal::from_integer(3, p));
        let three = a.scale(3);
        assert!(three.contains(1.0));
        let sq = CertifiedReal::from_integer(2, p).sqrt();
        assert!(sq.lower() <= core::f64::consts::SQRT_2 && core::f64::consts::SQRT_2 <= sq.upper());
        let back = sq.mul(&sq);
        assert!(back.contains(2.0));
        let pi = CertifiedReal::pi(200);
        assert_eq!(pi.lower(), core::f64::consts::PI);
        assert_eq!(pi.upper(), core::f64::consts::PI.next_up());
        assert_eq!(&pi.to_decimal(20)[..12], "3.1415926535");
        assert!(pi.err() < 1e-55);
    }

    #[test]
    fn sub_and_signs() {
        let a = CertifiedReal::exact_f64(0.25, 64);
        let b = CertifiedReal::exact_f64(0.5, 64);
        assert!(a.sub(&b).is_negative());
        assert!(b.sub(&a).is_positive());
        assert_eq!(a.sub(&b).to_decimal(3), "-0.250");
        assert!(a.overlaps(&a.with_prec(10)));
        assert!(!a.overlaps(&b));
    }

    #[test]
    fn working_precision_grows_with_digits() {
        assert!(precision_for(1e-10) >= 2 * 34);
        assert!(precision_for(1e-30) > precision_for(1e-10));
    }
}
