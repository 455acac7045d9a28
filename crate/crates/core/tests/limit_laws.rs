use std::f64::consts::PI;

use theta_heights_core::constants::{compute_rho, constants};
use theta_heights_core::enumeration::*;
use theta_heights_core::limit_laws::*;
use theta_heights_core::Error;

const LAMBDA: f64 = 1.130_033_716_399;

fn p() -> ThetaParams {
    ThetaParams::new(LAMBDA).unwrap()
}

// Poisson-summation form: S = 1 - 4 pi^(5/2) a^(-3/2) sum_m m^2 exp(-pi^2 m^2 / a), a = X^2/4
fn survival_dual(x: f64) -> f64 {
    let a = (LAMBDA * x).powi(2) / 4.0;
    let mut s = 0.0;
    for m in 1..60 {
        let m = m as f64;
        s += m * m * (-PI * PI * m * m / a).exp();
    }
    1.0 - 4.0 * PI.powf(2.5) * a.powf(-1.5) * s
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

#[test]
fn survival_matches_dual_series() {
    for big_x in [0.3, 0.8, 1.5, 2.5, 3.5, 5.0] {
        let x = big_x / LAMBDA;
        let s = theta_survival(x, p(), 1e-15).unwrap();
        assert!((s - survival_dual(x)).abs() < 1e-12, "X = {big_x}");
    }
}

#[test]
fn survival_is_monotone_and_bounded() {
    let eps = 1e-13;
    let vals: Vec<f64> = (3..=40)
        .map(|k| theta_survival(k as f64 / 10.0, p(), eps).unwrap())
        .collect();
    // values are accurate to eps, so order is only meaningful to eps
    for w in vals.windows(2) {
        assert!(w[1] <= w[0] + eps);
    }
    assert!(vals.iter().all(|&s| (0.0..=1.0 + eps).contains(&s)));
}

#[test]
fn local_is_minus_derivative() {
    let h = 1e-5;
    for x in [0.5, 1.0, 1.5, 2.0] {
        let up = theta_survival(x + h, p(), 1e-16).unwrap();
        let down = theta_survival(x - h, p(), 1e-16).unwrap();
        let g = theta_local(x, p(), 1e-16).unwrap();
        assert!((g + (up - down) / (2.0 * h)).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn j_forms_agree() {
    for x in [0.5, 1.0, 2.0] {
        let s = theta_survival(x, p(), 1e-15).unwrap();
        let j = theta_j(LAMBDA * x, 1e-15).unwrap();
        assert!((4.0 * PI.sqrt() * j - s).abs() < 1e-14);
    }
    let big_x = 1.5;
    let h = 1e-5;
    let d = (theta_j(big_x + h, 1e-16).unwrap() - theta_j(big_x - h, 1e-16).unwrap()) / (2.0 * h);
    assert!((theta_j1(big_x, 1e-16).unwrap() + d).abs() < 1e-9);
    // J(1) against the dual series
    assert!((4.0 * PI.sqrt() * theta_j(1.0, 1e-15).unwrap() - survival_dual(1.0 / LAMBDA)).abs() < 1e-13);
    assert!(theta_j(20.0, 1e-15).unwrap() < 1e-15);
}

#[test]
fn vanishing_far_right() {
    let x = 20.0 / LAMBDA;
    assert!(theta_survival(x, p(), 1e-15).unwrap() < 1e-15);
    assert!(theta_local(x, p(), 1e-15).unwrap() < 1e-15);
}

#[test]
fn density_integrates_to_one() {
    let (a, b) = (p().x_min(), 16.0 / LAMBDA);
    let g = |x: f64| theta_local(x, p(), 1e-15).unwrap();
    let mass = simpson(g, a, b, 20_000);
    assert!((mass - 1.0).abs() < 1e-6, "{mass}");
}

#[test]
fn moments_match_quadrature() {
    let (a, b) = (p().x_min(), 16.0 / LAMBDA);
    for r in 1..=4u32 {
        let f = |x: f64| x.powi(r as i32) * theta_local(x, p(), 1e-15).unwrap();
        let q = simpson(f, a, b, 20_000);
        let c = asymptotic_moment(r, p()).unwrap();
        assert!((q - c).abs() < 1e-6 * c.max(1.0), "r = {r}: {q} vs {c}");
    }
}

#[test]
fn small_x_policy() {
    assert!(matches!(
        theta_survival(0.001, p(), 1e-15),
        Err(Error::AccuracyLoss { .. })
    ));
    assert!(matches!(theta_local(0.001, p(), 1e-15), Err(Error::AccuracyLoss { .. })));
    // at the threshold itself the value is still clean
    assert!((theta_survival(p().x_min(), p(), 1e-12).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn moderate_tail_ratio() {
    for big_x in [6.0, 8.0, 12.0, 20.0] {
        let x = big_x / LAMBDA;
        let ratio = theta_survival(x, p(), 1e-300).unwrap() / moderate_tail(x, p());
        assert!((ratio - (1.0 - 2.0 / (big_x * big_x))).abs() < 1e-10);
    }
    let x = 20.0 / LAMBDA;
    assert!(moderate_tail(x, p()) < 1e-40);
}

// e_h(r) from exact coefficients, as a log
fn log_exceedance_oracle(h: usize, r: f64, order: usize) -> f64 {
    let counts = count_trees(order);
    let table = height_bounded_counts(order, h).unwrap();
    let ex = exceedance_counts(&table, &counts).unwrap();
    let logs: Vec<f64> = (1..=order)
        .filter_map(|n| {
            let e = ex.get(h, n).unwrap();
            (e.bits() > 0).then(|| ln_biguint(&e) + n as f64 * r.ln())
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

#[test]
fn tower_exceedance_matches_series() {
    for (h, r) in [(0, 0.3), (3, 0.3), (8, 0.25), (5, 0.35)] {
        let oracle = log_exceedance_oracle(h, r, 500);
        let got = log_exceedance(h, r);
        assert!(got >= oracle - 1e-12, "h = {h}, r = {r}");
        assert!((got - oracle).abs() < 1e-9, "h = {h}, r = {r}: {got} vs {oracle}");
    }
}

#[test]
fn saddle_bound_dominates_exact() {
    let rho = compute_rho(1e-12).unwrap().lower();
    let counts = count_trees(100);
    let table = height_bounded_columns(&[30, 60, 100], 99).unwrap();
    for n in [30, 60, 100] {
        let d = height_distribution(n, &table).unwrap();
        let mut prev = f64::INFINITY;
        for h in 1..n {
            let b = saddle_bound(n, h, &counts, rho).unwrap();
            let exact = d.tail_f64(h);
            assert!(b.log_bound >= exact.ln(), "n = {n}, h = {h}");
            if h >= n.div_ceil(2) {
                assert!(b.log_bound <= prev + 1e-12, "n = {n}, h = {h}");
            }
            prev = b.log_bound;
        }
    }
    assert!(matches!(
        saddle_bound(30, 30, &counts, rho),
        Err(Error::DegenerateRange { .. })
    ));
    assert!(saddle_bound(30, 0, &counts, rho).is_err());
    assert!(saddle_bound(101, 50, &counts, rho).is_err());
}

#[test]
fn saddle_rate_grows_with_n() {
    let rho = compute_rho(1e-12).unwrap().lower();
    let counts = count_trees(400);
    for xi in [0.3, 0.5, 0.7] {
        let rates: Vec<f64> = [50usize, 100, 200, 400]
            .iter()
            .map(|&n| {
                let h = (xi * n as f64).ceil() as usize;
                saddle_bound(n, h, &counts, rho).unwrap().rate(n)
            })
            .collect();
        for w in rates.windows(2) {
            assert!(w[1] > w[0], "xi = {xi}: {rates:?}");
        }
    }
}

#[test]
fn saddle_rate_positive() {
    let rho = compute_rho(1e-12).unwrap().lower();
    let counts = count_trees(200);
    let mut bad = Vec::new();
    for xi in [0.3, 0.5, 0.7] {
        for n in [50usize, 100, 200] {
            let h = (xi * n as f64).ceil() as usize;
            let rate = saddle_bound(n, h, &counts, rho).unwrap().rate(n);
            if !(rate > 0.0) {
                bad.push((xi, n, rate));
            }
        }
    }
    assert!(bad.is_empty(), "nonpositive rates: {bad:?}");
}

#[test]
fn constants_feed_theta_params() {
    let k = constants(1e-12).unwrap();
    let q = ThetaParams::new(k.lambda.value()).unwrap();
    let c1 = asymptotic_moment(1, q).unwrap();
    assert!((c1 - 2.0 * PI.sqrt() / k.lambda.value()).abs() < 1e-15);
    let c2 = asymptotic_moment(2, q).unwrap();
    assert!((c2 - 2.0 * (PI * PI / 6.0) * (2.0 / q.lambda()).powi(2)).abs() < 1e-12);
}
