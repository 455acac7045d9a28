//! Certified values of the singularity `rho` of `y(z)`, the constant
//! `lambda = sqrt(2 rho + 2 rho^2 y'(rho^2))`, and of `y`, `y'` at real points.
//!
//! Truncated sums are enclosed with rigorous tails. Below `1/4` the tail uses
//! the plane-tree bound `y_n <= 4^n`; closer to `rho` it uses the refined
//! bound `y_n <= rho^-n n^(-3/2) / 2`, checked exactly on every computed `n`.

use core::cmp::Ordering;

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::certified::{precision_for, shr_ceil, CertifiedReal};
use crate::enumeration::{count_trees, CountTable};
use crate::error::Error;

/// Precision used when evaluating at a double argument.
pub const EVAL_PREC: u32 = 192;

/// Upper limit on series terms for the certified routines.
pub const MAX_TERMS: usize = 4000;

/// Smallest tolerance accepted by [`compute_rho`] and [`compute_lambda`].
pub const MIN_TOL: f64 = 1e-100;

/// Geometric ratio used to size the number of terms: the plane-tree tail
/// `(4x)^(N+1) / (1 - 4x)` evaluated just above `rho^2 ~ 0.1622`.
const TAIL_RATIO: f64 = 0.66;

/// Certified value of `y(x) = sum_{n <= n_terms} y_n x^n` plus tail,
/// for `0 <= x < 1/4`.
pub fn eval_y_at(x: f64, n_terms: usize) -> Result<CertifiedReal, Error> {
    check_domain(x)?;
    let counts = count_trees(n_terms);
    let xi = CertifiedReal::exact_f64(x, EVAL_PREC);
    let (lo, hi) = y_bounds(&counts, &xi, n_terms);
    let hi = hi.ok_or(Error::DomainError("x must be below 1/4"))?;
    Ok(CertifiedReal::from_scaled(lo, hi, EVAL_PREC))
}

/// Certified value of `y'(x)`, for `0 <= x < 1/4`.
pub fn eval_y_prime_at(x: f64, n_terms: usize) -> Result<CertifiedReal, Error> {
    check_domain(x)?;
    let counts = count_trees(n_terms);
    let xi = CertifiedReal::exact_f64(x, EVAL_PREC);
    let (lo, hi) = y_prime_bounds(&counts, &xi, n_terms);
    let hi = hi.ok_or(Error::DomainError("x must be below 1/4"))?;
    Ok(CertifiedReal::from_scaled(lo, hi, EVAL_PREC))
}

fn check_domain(x: f64) -> Result<(), Error> {
    if !(x >= 0.0) {
        return Err(Error::DomainError("x must be nonnegative"));
    }
    if x >= 0.25 {
        return Err(Error::DomainError("x must be below 1/4"));
    }
    Ok(())
}

/// Enclosure `[lo, hi]` (scaled by `2^prec` of `x`) of `y(x)` for an interval
/// argument `x >= 0`. `hi` is `None` when the plane-tree tail diverges.
fn y_bounds(counts: &CountTable, x: &CertifiedReal, n_terms: usize) -> (BigInt, Option<BigInt>) {
    let prec = x.prec();
    let coeffs: Vec<BigUint> = counts.as_slice()[..n_terms].to_vec();
    let lo = horner(&coeffs, x.lo_scaled(), prec, false);
    let lo = mul_floor(&lo, x.lo_scaled(), prec);
    let hi = horner(&coeffs, x.hi_scaled(), prec, true);
    let hi = mul_ceil(&hi, x.hi_scaled(), prec);
    let tail = catalan_tail(x.hi_scaled(), prec, n_terms, false);
    (lo, tail.map(|t| hi + t))
}

fn y_prime_bounds(
    counts: &CountTable,
    x: &CertifiedReal,
    n_terms: usize,
) -> (BigInt, Option<BigInt>) {
    let prec = x.prec();
    // derivative coefficients: (n + 1) y_{n+1} for x^n, n = 0..n_terms-1
    let coeffs: Vec<BigUint> = counts.as_slice()[..n_terms]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigUint::from(i + 1))
        .collect();
    let lo = horner(&coeffs, x.lo_scaled(), prec, false);
    let hi = horner(&coeffs, x.hi_scaled(), prec, true);
    let tail = catalan_tail(x.hi_scaled(), prec, n_terms, true);
    (lo, tail.map(|t| hi + t))
}

// sum_{k=0}^{len-1} c[k] x^k with directed rounding; x >= 0 scaled by 2^prec
fn horner(coeffs: &[BigUint], x: &BigInt, prec: u32, up: bool) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        let prod = if up {
            mul_ceil(&acc, x, prec)
        } else {
            mul_floor(&acc, x, prec)
        };
        acc = (BigInt::from_biguint(Sign::Plus, c.clone()) << prec) + prod;
    }
    acc
}

fn mul_floor(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a * b) >> prec
}

fn mul_ceil(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    shr_ceil(&(a * b), prec)
}

// upper bound on q^k, q >= 0 scaled by 2^prec
fn pow_ceil(q: &BigInt, k: usize, prec: u32) -> BigInt {
    let mut result = BigInt::one() << prec;
    let mut base = q.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_ceil(&result, &base, prec);
        }
        e >>= 1;
        if e > 0 {
            base = mul_ceil(&base, &base, prec);
        }
    }
    result
}

/// Upper bound, scaled by `2^prec`, on the plane-tree tail beyond `n_terms`
/// at `x` (already an upper endpoint). For the value: `q^(N+1) / (1 - q)`;
/// for the derivative: `4 q^N (N + 1 - N q) / (1 - q)^2`, with `q = 4x`.
fn catalan_tail(x_hi: &BigInt, prec: u32, n_terms: usize, derivative: bool) -> Option<BigInt> {
    let one = BigInt::one() << prec;
    let q = x_hi << 2u32;
    if q >= one {
        return None;
    }
    let gap = &one - &q; // exact
    if !derivative {
        let num = pow_ceil(&q, n_terms + 1, prec) << prec;
        return Some(div_ceil_pos(&num, &gap));
    }
    let n = BigInt::from(n_terms);
    let lin = (&n + 1u32) * &one - &n * &q; // exact, scaled by 2^prec
    let num = mul_ceil(&pow_ceil(&q, n_terms, prec), &lin, prec) << 2u32;
    let gap_sq = (&gap * &gap) >> prec; // rounded down keeps the bound valid
    if gap_sq.is_zero() {
        return None;
    }
    Some(div_ceil_pos(&(num << prec), &gap_sq))
}

fn div_ceil_pos(num: &BigInt, den: &BigInt) -> BigInt {
    let q = num / den;
    if &q * den == *num {
        q
    } else {
        q + 1
    }
}

/// Enclosure of `F(r) = 2r + y(r^2) - 1` at an exact dyadic `r`;
/// the upper end is `None` when the tail bound is unavailable.
fn rho_equation(counts: &CountTable, r: &BigInt, prec: u32, n_terms: usize) -> (BigInt, Option<BigInt>) {
    let r2 = CertifiedReal::from_scaled(r * r, r * r, 2 * prec).with_prec(prec);
    let (lo, hi) = y_bounds(counts, &r2, n_terms);
    let base = (r << 1u32) - (BigInt::one() << prec);
    (&base + lo, hi.map(|h| base + h))
}

/// Certified sign of `2r + y(r^2) - 1`, or `None` when the enclosure
/// straddles zero.
pub fn rho_equation_sign(r: f64, n_terms: usize) -> Option<Ordering> {
    let counts = count_trees(n_terms);
    let rr = CertifiedReal::exact_f64(r, EVAL_PREC);
    if rr.err() != 0.0 || r < 0.0 {
        return None;
    }
    let (lo, hi) = rho_equation(&counts, rr.lo_scaled(), EVAL_PREC, n_terms);
    if lo.is_positive() {
        Some(Ordering::Greater)
    } else if hi.is_some_and(|h| h.is_negative()) {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Number of terms making the plane-tree tail near `rho^2` fall below `target`.
pub fn terms_for(target: f64) -> Result<usize, Error> {
    if !(target > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    if target < MIN_TOL / 64.0 {
        return Err(Error::ToleranceUnreachable {
            requested: target,
            achieved: MIN_TOL,
        });
    }
    let ln_ratio = libm::log(TAIL_RATIO);
    let need = (libm::log(target * (1.0 - TAIL_RATIO)) / ln_ratio).max(1.0);
    let n = libm::ceil(need) as usize + 8;
    if n > MAX_TERMS {
        return Err(Error::ToleranceUnreachable {
            requested: target,
            achieved: libm::pow(TAIL_RATIO, MAX_TERMS as f64 + 1.0) / (1.0 - TAIL_RATIO),
        });
    }
    Ok(n)
}

/// The radius of convergence `rho`, root of `2r + y(r^2) = 1` in `[1/4, 1/2]`,
/// enclosed with half-width at most `tol`.
pub fn compute_rho(tol: f64) -> Result<CertifiedReal, Error> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument("tolerance must be positive and finite"));
    }
    let n_terms = terms_for(tol / 16.0)?;
    let prec = precision_for(tol);
    let counts = count_trees(n_terms);
    let one = BigInt::one() << prec;
    let mut lo = &one >> 2u32;
    let mut hi = &one >> 1u32;

    // the bracket itself must be certified before bisecting
    let (_, f_lo_hi) = rho_equation(&counts, &lo, prec, n_terms);
    let (f_hi_lo, _) = rho_equation(&counts, &hi, prec, n_terms);
    if !(f_lo_hi.is_some_and(|v| v.is_negative()) && f_hi_lo.is_positive()) {
        return Err(Error::DomainError("bracket [1/4, 1/2] not certified"));
    }

    let two_tol = crate::certified::scaled_floor(2.0 * tol, prec);
    while &hi - &lo > two_tol {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        let (f_lo, f_hi) = rho_equation(&counts, &mid, prec, n_terms);
        if f_lo.is_positive() {
            hi = mid;
        } else if f_hi.as_ref().is_some_and(|v| v.is_negative()) {
            lo = mid;
        } else {
            // F' >= 2 on the bracket, so |mid - rho| <= |F(mid)| / 2
            let spread = match f_hi {
                Some(v) => v.abs().max(f_lo.abs()),
                None => break,
            };
            let reach = shr_ceil(&spread, 1);
            lo = lo.max(&mid - &reach);
            hi = hi.min(&mid + &reach);
            break;
        }
    }
    let rho = CertifiedReal::from_scaled(lo, hi, prec);
    if rho.err() > tol {
        return Err(Error::ToleranceUnreachable {
            requested: tol,
            achieved: rho.err(),
        });
    }
    Ok(rho)
}

/// `lambda = sqrt(2 rho + 2 rho^2 y'(rho^2))`, propagated through interval
/// arithmetic from the enclosure of `rho`.
pub fn compute_lambda(rho: &CertifiedReal, tol: f64) -> Result<CertifiedReal, Error> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument("tolerance must be positive and finite"));
    }
    if !rho.is_positive() || rho.upper() >= 0.5 {
        return Err(Error::DomainError("rho enclosure must lie in (0, 1/2)"));
    }
    let n_terms = terms_for(tol / 64.0)?;
    let prec = precision_for(tol).max(rho.prec());
    let rho = rho.with_prec(prec);
    let counts = count_trees(n_terms);
    let x = rho.mul(&rho);
    let (lo, hi) = y_prime_bounds(&counts, &x, n_terms);
    let hi = hi.ok_or(Error::DomainError("rho^2 must be below 1/4"))?;
    let y_prime = CertifiedReal::from_scaled(lo, hi, prec);
    let inner = rho.scale(2).add(&x.mul(&y_prime).scale(2));
    let lambda = inner.sqrt();
    if lambda.err() > tol {
        return Err(Error::ToleranceUnreachable {
            requested: tol,
            achieved: lambda.err(),
        });
    }
    Ok(lambda)
}

/// `lambda / (2 sqrt(pi))`, the constant in the asymptotic count of trees.
pub fn otter_constant(lambda: &CertifiedReal) -> CertifiedReal {
    let prec = lambda.prec();
    let two_sqrt_pi = CertifiedReal::pi(prec).sqrt().scale(2);
    lambda.div(&two_sqrt_pi)
}

/// The three constants together, each enclosed within `tol`.
#[derive(Clone, Debug)]
pub struct Constants {
    pub rho: CertifiedReal,
    pub lambda: CertifiedReal,
    pub otter: CertifiedReal,
}

/// Computes `rho`, `lambda` and `lambda / (2 sqrt(pi))`. `rho` is found to
/// `tol / 64` so that its propagated error leaves room for `lambda`.
pub fn constants(tol: f64) -> Result<Constants, Error> {
    let rho = compute_rho(tol / 64.0)?;
    let lambda = compute_lambda(&rho, tol)?;
    let otter = otter_constant(&lambda);
    if otter.err() > tol {
        return Err(Error::ToleranceUnreachable {
            requested: tol,
            achieved: otter.err(),
        });
    }
    Ok(Constants { rho, lambda, otter })
}

/// Certified `y(x)` for `0 <= x <= rho` from `y(x) = 1 - sqrt(1 - 2x - y(x^2))`,
/// which stays accurate up to the singularity where the series itself
/// converges too slowly to sum.
pub fn eval_y_near_rho(x: &CertifiedReal, n_terms: usize) -> Result<CertifiedReal, Error> {
    if x.lo_scaled().is_negative() || x.upper() >= 0.5 {
        return Err(Error::DomainError("x must lie in [0, rho]"));
    }
    let counts = count_trees(n_terms);
    let prec = x.prec();
    let x2 = x.mul(x);
    let (lo, hi) = y_bounds(&counts, &x2, n_terms);
    let hi = hi.ok_or(Error::DomainError("x^2 must be below 1/4"))?;
    let y_sq = CertifiedReal::from_scaled(lo, hi, prec);
    let arg = CertifiedReal::from_integer(1, prec).sub(&x.scale(2)).sub(&y_sq);
    if arg.is_negative() {
        return Err(Error::DomainError("x exceeds rho"));
    }
    Ok(CertifiedReal::from_integer(1, prec).sub(&arg.sqrt()))
}

/// Checks `y_n <= rho_ub^-n n^(-3/2) / 2` exactly for every `n` in the table,
/// where `rho_ub` is the upper end of the enclosure. Returns the first `n`
/// that violates it.
pub fn check_coefficient_bound(counts: &CountTable, rho: &CertifiedReal) -> Result<(), usize> {
    // 4 n^3 y_n^2 H^(2n) <= 2^(2 p n) with rho_ub = H / 2^p
    let p = rho.prec() as usize;
    let h = rho.hi_scaled().magnitude().clone();
    let h2 = &h * &h;
    let mut h_pow = BigUint::one();
    for (i, y) in counts.as_slice().iter().enumerate() {
        let n = i + 1;
        h_pow *= &h2;
        let n3 = BigUint::from(n).pow(3u32);
        let lhs = (n3 * y * y * &h_pow) << 2u32;
        let rhs = BigUint::one() << (2 * p * n);
        if lhs > rhs {
            return Err(n);
        }
    }
    Ok(())
}

/// Certified `y(x)` for `0 <= x < rho_lb`, summing `n_terms` terms and
/// bounding the rest with `y_n <= rho_ub^-n n^(-3/2) / 2`. Useful between
/// `1/4` and `rho`, where the plane-tree tail diverges.
pub fn eval_y_refined(x: f64, n_terms: usize, rho: &CertifiedReal) -> Result<CertifiedReal, Error> {
    if !(x >= 0.0) || x >= rho.lower() {
        return Err(Error::DomainError("x must lie in [0, rho)"));
    }
    let counts = count_trees(n_terms);
    if let Err(n) = check_coefficient_bound(&counts, rho) {
        debug_assert!(false, "coefficient bound fails at n = {n}");
        return Err(Error::DomainError("coefficient bound does not hold"));
    }
    let prec = EVAL_PREC.max(rho.prec());
    let xi = CertifiedReal::exact_f64(x, prec);
    let coeffs: Vec<BigUint> = counts.as_slice().to_vec();
    let lo = mul_floor(&horner(&coeffs, xi.lo_scaled(), prec, false), xi.lo_scaled(), prec);
    let hi = mul_ceil(&horner(&coeffs, xi.hi_scaled(), prec, true), xi.hi_scaled(), prec);
    // beyond the table y_n <= rho^-n n^(-3/2) / 2 <= rho_lb^-n n^(-3/2) / 2, so
    // tail <= (1/2) q^(N+1) (N+1)^(-3/2) / (1 - q) with q = x / rho_lb
    let rho_p = rho.with_prec(prec);
    let q = xi.div(&rho_p);
    let one = BigInt::one() << prec;
    let q_hi = q.hi_scaled().clone();
    if q_hi >= one {
        return Err(Error::DomainError("x too close to rho"));
    }
    let n1 = (n_terms + 1) as f64;
    let decay = CertifiedReal::exact_f64(libm::pow(n1, -1.5), prec);
    let decay_hi = decay.hi_scaled() + 1; // covers libm rounding (< 1 ulp)
    let geo = div_ceil_pos(&(pow_ceil(&q_hi, n_terms + 1, prec) << prec), &(&one - &q_hi));
    let tail = shr_ceil(&mul_ceil(&geo, &decay_hi, prec), 1);
    Ok(CertifiedReal::from_scaled(lo, hi + tail, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_at_zero() {
        let y = eval_y_at(0.0, 30).unwrap();
        assert_eq!((y.value(), y.err()), (0.0, 0.0));
        let yp = eval_y_prime_at(0.0, 30).unwrap();
        assert_eq!((yp.value(), yp.err()), (1.0, 0.0));
    }

    #[test]
    fn eval_tail_size() {
        let y = eval_y_at(0.162, 60).unwrap();
        let bound = libm::pow(0.648, 61.0) / 0.352;
        assert!(bound < 1e-11);
        assert!(y.err() >= bound / 2.0 * 0.999 && y.err() < 1e-11);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(eval_y_at(0.25, 10), Err(Error::DomainError(_))));
        assert!(matches!(eval_y_at(-0.1, 10), Err(Error::DomainError(_))));
        assert!(matches!(eval_y_prime_at(0.3, 10), Err(Error::DomainError(_))));
        assert!(compute_rho(0.0).is_err());
        assert!(matches!(compute_rho(1e-300), Err(Error::ToleranceUnreachable { .. })));
    }

    #[test]
    fn bracket_signs() {
        assert_eq!(rho_equation_sign(0.25, 80), Some(Ordering::Less));
        assert_eq!(rho_equation_sign(0.5, 80), Some(Ordering::Greater));
    }
}
