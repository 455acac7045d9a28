use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use theta_heights_core::constants::{check_coefficient_bound, constants};
use theta_heights_core::enumeration::*;
use theta_heights_core::series::TruncatedIntSeries;

// y_n by fixed-point iteration of y = z + (y^2 + y(z^2)) / 2 on series
fn series_counts(order: usize) -> Vec<BigInt> {
    let z = TruncatedIntSeries::monomial(1, order);
    let mut y = z.clone();
    for _ in 0..order {
        let doubled = &y.square() + &y.polya_substitute();
        let next = &z + &doubled.half().unwrap();
        if next == y {
            break;
        }
        y = next;
    }
    y.into_coeffs()
}

// y_{h,n} from unordered splits of height-bounded subtrees
fn split_height_counts(n_max: usize, h_max: usize) -> Vec<Vec<BigUint>> {
    let mut t = vec![vec![BigUint::zero(); n_max + 1]; h_max + 1];
    t[0][1] = BigUint::one();
    for h in 1..=h_max {
        t[h][1] = BigUint::one();
        for n in 2..=n_max {
            let prev = &t[h - 1];
            let mut acc = BigUint::zero();
            for k in 1..n.div_ceil(2) {
                acc += &prev[k] * &prev[n - k];
            }
            if n % 2 == 0 {
                let m = &prev[n / 2];
                acc += (m * m + m) >> 1u32;
            }
            t[h][n] = acc;
        }
    }
    t
}

#[test]
fn wedderburn_etherington_prefix() {
    let c = count_trees(12);
    let got: Vec<u64> = c.as_slice().iter().map(|v| v.to_u64().unwrap()).collect();
    assert_eq!(got, [1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451]);
    assert_eq!(count_trees(0).n_max(), 0);
    assert!(c.get(0).is_none());
}

#[test]
fn counts_match_functional_equation() {
    let order = 120;
    let s = series_counts(order);
    let c = count_trees(order);
    for n in 1..=order {
        assert_eq!(BigInt::from(c.get(n).unwrap().clone()), s[n], "n = {n}");
    }
}

#[test]
fn brute_force_equivalence_up_to_12() {
    let table = height_bounded_counts(12, 11).unwrap();
    for n in 1..=12 {
        let bf = brute_force_enumerate(n).unwrap();
        assert_eq!(BigUint::from(bf.trees().len()), *count_trees(n).get(n).unwrap());
        for h in 0..=11 {
            assert_eq!(
                *table.get(h, n).unwrap(),
                BigUint::from(bf.count_at_most(h)),
                "n = {n}, h = {h}"
            );
        }
        assert!(bf.trees().iter().all(|t| t.size() == n && t.check_invariants()));
    }
    assert!(brute_force_enumerate(BRUTE_FORCE_LIMIT + 1).is_err());
}

#[test]
fn height_table_matches_split_recurrence() {
    let (n_max, h_max) = (60, 20);
    let oracle = split_height_counts(n_max, h_max);
    let table = height_bounded_counts(n_max, h_max).unwrap();
    for h in 0..=h_max {
        for n in 1..=n_max {
            assert_eq!(*table.get(h, n).unwrap(), oracle[h][n], "h = {h}, n = {n}");
        }
    }
}

#[test]
fn selected_columns_match_full_table() {
    let full = height_bounded_counts(50, 49).unwrap();
    let part = height_bounded_columns(&[50, 17, 30], 49).unwrap();
    assert_eq!(part.sizes().collect::<Vec<_>>(), vec![17, 30, 50]);
    for n in [17, 30, 50] {
        assert_eq!(part.column(n), full.column(n));
    }
    assert!(!part.has_column(20));
    assert!(height_bounded_columns(&[], 3).is_err());
}

#[test]
fn saturation_and_small_heights() {
    let c = count_trees(40);
    let t = height_bounded_counts(40, 45).unwrap();
    for n in 1..=40 {
        assert_eq!(t.get(n - 1, n), c.get(n));
        assert_eq!(t.get(45, n), c.get(n));
        // height is at least ceil(log2 n)
        let min_h = (usize::BITS - (n - 1).leading_zeros()) as usize;
        if min_h > 0 {
            assert!(t.get(min_h - 1, n).unwrap().is_zero(), "n = {n}");
        }
        assert!(!t.get(min_h, n).unwrap().is_zero());
    }
    assert!(t.get(46, 3).is_none());
}

#[test]
fn exceedance_via_series_difference() {
    // e_3 = y - y_3 as series, against the column differences
    let order = 10;
    let z = TruncatedIntSeries::monomial(1, order);
    let mut y_h = z.clone();
    for _ in 0..3 {
        let doubled = &y_h.square() + &y_h.polya_substitute();
        y_h = &z + &doubled.half().unwrap();
    }
    let y = TruncatedIntSeries::from_coeffs(series_counts(order), order);
    let e3 = &y - &y_h;
    let table = height_bounded_counts(order, 9).unwrap();
    let ex = exceedance_counts(&table, &count_trees(order)).unwrap();
    for n in 1..=order {
        assert_eq!(BigInt::from(ex.get(3, n).unwrap()), e3.coeffs()[n], "n = {n}");
    }
    assert!(exceedance_counts(&table, &count_trees(5)).is_err());
}

#[test]
fn distribution_is_a_law() {
    let t = height_bounded_counts(80, 79).unwrap();
    for n in [1, 2, 7, 33, 80] {
        let d = height_distribution(n, &t).unwrap();
        let total: BigRational = d.probs().into_iter().sum();
        assert_eq!(total, BigRational::one());
        assert_eq!(d.tail(0), BigRational::one());
        assert_eq!(exact_moment(&d, 0), BigRational::one());
        for h in 0..n {
            assert_eq!(d.tail(h) - d.tail(h + 1), d.prob(h));
        }
    }
    let d1 = height_distribution(1, &t).unwrap();
    assert_eq!(d1.probs(), vec![BigRational::one()]);
    let short = height_bounded_counts(80, 10).unwrap();
    assert!(matches!(
        height_distribution(80, &short),
        Err(theta_heights_core::Error::InsufficientTable { .. })
    ));
}

#[test]
fn exact_moments_small() {
    // n = 4: heights 2 (balanced) and 3 (caterpillar)
    let t = height_bounded_counts(4, 3).unwrap();
    let d = height_distribution(4, &t).unwrap();
    assert_eq!(exact_moment(&d, 1), BigRational::new(5.into(), 2.into()));
    assert_eq!(exact_moment(&d, 2), BigRational::new(13.into(), 2.into()));
}

#[test]
fn ratio_and_log_helpers() {
    let big = BigUint::from(3u32).pow(2000);
    let ln = ln_biguint(&big);
    assert!((ln - 2000.0 * 3f64.ln()).abs() < 1e-9 * ln);
    let r = ratio_f64(&(&big * 2u32), &(&big * 7u32));
    assert!((r - 2.0 / 7.0).abs() < 1e-16);
    assert_eq!(ratio_f64(&BigUint::zero(), &big), 0.0);
}

#[test]
fn coefficient_bound_holds() {
    let c = count_trees(400);
    let k = constants(1e-12).unwrap();
    assert_eq!(check_coefficient_bound(&c, &k.rho), Ok(()));
}

#[test]
fn otter_deviation_shrinks() {
    let k = constants(1e-14).unwrap();
    let (rho, lambda) = (k.rho.value(), k.lambda.value());
    let c = count_trees(400);
    let dev = |n: usize| {
        let ln = c.ln(n).unwrap() + (2.0 * std::f64::consts::PI.sqrt() / lambda).ln()
            + 1.5 * (n as f64).ln()
            + n as f64 * rho.ln();
        (ln.exp() - 1.0).abs()
    };
    let (d100, d200, d400) = (dev(100), dev(200), dev(400));
    assert!(d400 < d200 && d200 < d100, "{d100} {d200} {d400}");
    assert!(d200 / d400 > 1.8 && d100 / d200 > 1.8);
}
