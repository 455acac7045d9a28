//! Theta limit laws for the rescaled height `H_n / sqrt(n)`, moment
//! constants and tail bounds.
//!
//! With `X = lambda x` the limiting survival function is
//! `S(x) = sum_{k>=1} (k^2 X^2 - 2) exp(-k^2 X^2 / 4)` and the limiting
//! density is `g(x) = -S'(x) = (1/(2x)) sum_{k>=1} (k^4 X^4 - 6 k^2 X^2) exp(-k^2 X^2 / 4)`.
//! The sums converge fast for moderate `X` but cancel heavily as `X -> 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::enumeration::CountTable;
use crate::error::Error;
use crate::special::{gamma_half, zeta};

/// Below `lambda x = 0.1` the theta sums are checked for cancellation.
pub const SCALED_X_MIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams {
    lambda: f64,
}

impl ThetaParams {
    pub fn new(lambda: f64) -> Result<Self, Error> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Self { lambda })
        } else {
            Err(Error::InvalidArgument("lambda must be positive and finite"))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Smallest `x` at which the theta sums are evaluated unconditionally.
    pub fn x_min(&self) -> f64 {
        SCALED_X_MIN / self.lambda
    }
}

/// Neumaier-compensated sum that also tracks the mass of absolute values,
/// which drives the cancellation error estimate.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
    abs_mass: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs_mass += v.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn term_count(scaled_x: f64, eps: f64) -> usize {
    let reach = libm::sqrt(libm::log(1.0 / eps).max(0.0) + 10.0);
    libm::ceil(2.0 / scaled_x * reach) as usize + 5
}

/// Sums `term(k^2 X^2) * exp(-k^2 X^2 / 4)` over `k >= 1` and returns the
/// sum with a rounding-error estimate.
fn theta_sum(scaled_x: f64, eps: f64, term: impl Fn(f64) -> f64) -> (f64, f64) {
    let k_max = term_count(scaled_x, eps);
    let mut acc = CompensatedSum::default();
    for k in 1..=k_max {
        let u = (k as f64 * scaled_x) * (k as f64 * scaled_x);
        let w = libm::exp(-u / 4.0);
        if w == 0.0 {
            break;
        }
        acc.add(term(u) * w);
    }
    // each term carries a few ulps from exp and the polynomial factor
    let error = 4.0 * f64::EPSILON * acc.abs_mass;
    (acc.value(), error)
}

fn check_args(x: f64, eps: f64) -> Result<(), Error> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument("x must be positive and finite"));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive"));
    }
    Ok(())
}

fn guard(scaled_x: f64, x: f64, error: f64, eps: f64) -> Result<(), Error> {
    if scaled_x < SCALED_X_MIN && error > eps {
        Err(Error::AccuracyLoss {
            x,
            error_estimate: error,
        })
    } else {
        Ok(())
    }
}

/// Limiting survival function `lim P(H_n >= x sqrt(n))`.
pub fn theta_survival(x: f64, p: ThetaParams, eps: f64) -> Result<f64, Error> {
    check_args(x, eps)?;
    let big_x = p.lambda * x;
    let (s, err) = theta_sum(big_x, eps, |u| u - 2.0);
    guard(big_x, x, err, eps)?;
    // rounding can push the sum a few ulps outside the range of a probability
    Ok(s.clamp(0.0, 1.0))
}

/// Limiting density `g(x)`: `P(H_n = h) ~ g(h / sqrt(n)) / sqrt(n)`.
pub fn theta_local(x: f64, p: ThetaParams, eps: f64) -> Result<f64, Error> {
    check_args(x, eps)?;
    let big_x = p.lambda * x;
    let (s, err) = theta_sum(big_x, eps, |u| u * u - 6.0 * u);
    let scale = 1.0 / (2.0 * x);
    guard(big_x, x, err * scale, eps)?;
    Ok(s * scale)
}

/// `J(X) = (1 / (4 sqrt(pi))) sum_{k>=1} exp(-k^2 X^2 / 4) (k^2 X^2 - 2)`.
pub fn theta_j(big_x: f64, eps: f64) -> Result<f64, Error> {
    check_args(big_x, eps)?;
    let (s, err) = theta_sum(big_x, eps, |u| u - 2.0);
    let scale = 1.0 / (4.0 * libm::sqrt(PI));
    guard(big_x, big_x, err * scale, eps)?;
    Ok(s * scale)
}

/// `J_1(X) = -J'(X) = (1 / (8 sqrt(pi) X)) sum_{k>=1} exp(-k^2 X^2 / 4) (k^4 X^4 - 6 k^2 X^2)`.
pub fn theta_j1(big_x: f64, eps: f64) -> Result<f64, Error> {
    check_args(big_x, eps)?;
    let (s, err) = theta_sum(big_x, eps, |u| u * u - 6.0 * u);
    let scale = 1.0 / (8.0 * libm::sqrt(PI) * big_x);
    guard(big_x, big_x, err * scale, eps)?;
    Ok(s * scale)
}

/// `c_r` with `E[H_n^r] ~ c_r n^(r/2)`: `c_1 = 2 sqrt(pi) / lambda`,
/// `c_r = r (r-1) zeta(r) Gamma(r/2) (2/lambda)^r` for `r >= 2`.
pub fn asymptotic_moment(r: u32, p: ThetaParams) -> Result<f64, Error> {
    let two_over = 2.0 / p.lambda;
    match r {
        0 => Err(Error::InvalidArgument("moment order must be >= 1")),
        1 => Ok(two_over * libm::sqrt(PI)),
        _ => {
            let rf = r as f64;
            Ok(rf * (rf - 1.0) * zeta(r) * gamma_half(r) * libm::pow(two_over, rf))
        }
    }
}

/// One-term tail `X^2 exp(-X^2 / 4)`, `X = lambda x`. Only meaningful for
/// large `x`; the relative gap to the full survival sum is `2 / X^2` plus
/// terms of order `exp(-3 X^2 / 4)`.
pub fn moderate_tail(x: f64, p: ThetaParams) -> f64 {
    let u = (p.lambda * x) * (p.lambda * x);
    u * libm::exp(-u / 4.0)
}

/// Result of the saddle-point bound on `P(H_n >= h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleBound {
    /// Upper bound on `P(H_n >= h)`, including the rounding slack.
    pub bound: f64,
    /// Natural log of `bound`, finite even when `bound` underflows.
    pub log_bound: f64,
    /// Minimising radius `r`.
    pub radius: f64,
}

impl SaddleBound {
    /// `-(1/n) log(bound)`.
    pub fn rate(&self, n: usize) -> f64 {
        -self.log_bound / n as f64
    }
}

/// Search interval for the radius: `[R_MIN, rho - R_GAP]`.
pub const R_MIN: f64 = 0.05;
pub const R_GAP: f64 = 1e-6;
/// Points in the fallback grid.
pub const GRID_POINTS: usize = 200;
/// Tower depth stops once `r^(2^j)` falls below this.
pub const TOWER_FLOOR: f64 = 1e-30;
/// Relative slack applied to the floating-point bound.
pub const BOUND_SLACK: f64 = 1e-10;

/// Upper bound on `P(H_n >= h) = e_{h-1,n} / y_n`, minimising
/// `e_{h-1}(r) / (r^n y_n)` over `r` in `[0.05, rho - 1e-6]`. `rho` should be
/// a lower bound on the singularity.
pub fn saddle_bound(n: usize, h: usize, counts: &CountTable, rho: f64) -> Result<SaddleBound, Error> {
    if h == 0 || h >= n {
        return Err(Error::DegenerateRange { n, h });
    }
    let ln_yn = counts.ln(n).ok_or(Error::InsufficientTable {
        needed_n: n,
        needed_h: 0,
    })?;
    if !(rho > R_MIN + R_GAP && rho < 0.5) {
        return Err(Error::InvalidArgument("rho must lie in (0.05, 0.5)"));
    }
    let objective = |r: f64| log_exceedance(h - 1, r) - n as f64 * libm::log(r) - ln_yn;

    let (lo, hi) = (R_MIN, rho - R_GAP);
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..GRID_POINTS)
        .map(|i| {
            let r = lo + step * i as f64;
            (r, objective(r))
        })
        .collect();
    let mut best = grid[0];
    let mut best_i = 0;
    for (i, &(r, v)) in grid.iter().enumerate() {
        // strict comparison keeps the smaller radius on ties
        if v < best.1 {
            best = (r, v);
            best_i = i;
        }
    }
    let a = grid[best_i.saturating_sub(1)].0;
    let b = grid[(best_i + 1).min(GRID_POINTS - 1)].0;
    let refined = golden_section(&objective, a, b, 80);
    if refined.1 < best.1 {
        best = refined;
    }
    let log_bound = best.1 + libm::log1p(BOUND_SLACK);
    Ok(SaddleBound {
        bound: libm::exp(log_bound),
        log_bound,
        radius: best.0,
    })
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Upper bound on `ln e_h(r)` for `0 < r < rho`, where `e_h = y - y_h`
/// counts trees of height exceeding `h`.
///
/// Runs `e_{k+1}(t) = e_k(t) (y(t) - e_k(t)/2) + e_k(t^2)/2` from
/// `e_0 = y(t) - t` jointly over the tower `t_j = r^(2^j)`, in log space.
/// At the deepest level the plane-tree bound `e_k(t) <= (4t)^(k+2) / (1 - 4t)`
/// is used, which keeps the result an upper bound.
pub fn log_exceedance(h: usize, r: f64) -> f64 {
    let mut tower = Vec::new();
    let mut t = r;
    loop {
        tower.push(t);
        if t < TOWER_FLOOR {
            break;
        }
        t *= t;
    }
    let depth = tower.len();
    // y(t_j) from the bottom: y(t) = eps / (1 + sqrt(1 - eps)), eps = 2t + y(t^2)
    let mut y = alloc::vec![0.0; depth];
    let bottom = tower[depth - 1];
    y[depth - 1] = bottom + 4.0 * bottom * bottom / (1.0 - 4.0 * bottom);
    for j in (0..depth - 1).rev() {
        let e = 2.0 * tower[j] + y[j + 1];
        y[j] = e / (1.0 + libm::sqrt(1.0 - e));
    }
    let bottom_bound = |k: usize| {
        (k + 2) as f64 * libm::log(4.0 * bottom) - libm::log1p(-4.0 * bottom)
    };
    // ln e_0(t_j), with e_0 = y^2/2 + y(t^2)/2 (no cancellation)
    let mut log_e: Vec<f64> = (0..depth)
        .map(|j| {
            if j + 1 == depth {
                bottom_bound(0)
            } else {
                libm::log(0.5 * y[j] * y[j] + 0.5 * y[j + 1])
            }
        })
        .collect();
    for k in 0..h {
        let mut next = log_e.clone();
        for j in 0..depth - 1 {
            let e = libm::exp(log_e[j]);
            let polya = libm::exp(log_e[j + 1] - log_e[j]);
            next[j] = log_e[j] + libm::log(y[j] - 0.5 * e + 0.5 * polya);
        }
        next[depth - 1] = bottom_bound(k + 1);
        log_e = next;
    }
    log_e[0]
}
