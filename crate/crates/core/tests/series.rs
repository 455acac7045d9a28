use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use theta_heights_core::series::*;
use theta_heights_core::TruncatedIntSeries;

// full product, then cut at the smaller order
fn naive_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let order = a.len().min(b.len()) - 1;
    let mut out = vec![BigInt::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.truncate(order + 1);
    out
}

fn series(max_order: usize) -> impl Strategy<Value = TruncatedIntSeries> {
    (0..=max_order).prop_flat_map(|order| {
        prop::collection::vec(any::<i64>(), order + 1)
            .prop_map(move |c| TruncatedIntSeries::from_coeffs(c, order))
    })
}

fn series_of(order: usize) -> impl Strategy<Value = TruncatedIntSeries> {
    prop::collection::vec(any::<i64>(), order + 1)
        .prop_map(move |c| TruncatedIntSeries::from_coeffs(c, order))
}

proptest! {
    #[test]
    fn mul_matches_naive(a in series(40), b in series(40)) {
        let got = series_mul(&a, &b);
        prop_assert_eq!(got.order(), a.order().min(b.order()));
        let expect = naive_mul(a.coeffs(), b.coeffs());
        prop_assert_eq!(got.coeffs(), expect.as_slice());
    }

    #[test]
    fn square_matches_mul(a in series(60)) {
        let b = a.clone();
        prop_assert_eq!(a.square(), series_mul(&a, &b));
    }

    #[test]
    fn mul_commutes(a in series_of(30), b in series_of(30)) {
        prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
    }

    #[test]
    fn mul_associates(a in series_of(20), b in series_of(20), c in series_of(20)) {
        prop_assert_eq!(
            series_mul(&series_mul(&a, &b), &c),
            series_mul(&a, &series_mul(&b, &c))
        );
    }

    #[test]
    fn mul_distributes(a in series_of(25), b in series_of(25), c in series_of(25)) {
        prop_assert_eq!(
            series_mul(&a, &series_add(&b, &c)),
            series_add(&series_mul(&a, &b), &series_mul(&a, &c))
        );
    }

    #[test]
    fn polya_is_linear(a in series_of(40), b in series_of(40)) {
        prop_assert_eq!(
            polya_substitute(&series_add(&a, &b)),
            series_add(&polya_substitute(&a), &polya_substitute(&b))
        );
    }

    #[test]
    fn polya_places_coefficients(a in series(50)) {
        let p = polya_substitute(&a);
        prop_assert_eq!(p.order(), a.order());
        for (k, c) in p.coeffs().iter().enumerate() {
            if k % 2 == 1 {
                prop_assert!(c.is_zero());
            } else {
                prop_assert_eq!(c, &a.coeffs()[k / 2]);
            }
        }
    }

    #[test]
    fn square_plus_polya_is_even(a in series(50)) {
        // a^2 + a(z^2) has even coefficients: a_k^2 + a_k is even
        let doubled = series_add(&a.square(), &polya_substitute(&a));
        let h = half_of(&doubled).unwrap();
        prop_assert_eq!(series_add(&h, &h), doubled);
    }

    #[test]
    fn sub_inverts_add(a in series_of(30), b in series_of(30)) {
        prop_assert_eq!(&series_add(&a, &b) - &b, a.clone());
        prop_assert_eq!(&(-&a) + &a, TruncatedIntSeries::zero(30));
    }
}

#[test]
fn odd_coefficient_rejected() {
    let a = TruncatedIntSeries::from_coeffs([2, 4, 3], 2);
    assert!(matches!(
        half_of(&a),
        Err(theta_heights_core::Error::OddCoefficient { index: 2 })
    ));
}

#[test]
fn display_marks_truncation() {
    let a = TruncatedIntSeries::from_coeffs([0, 1, 0, 2], 4);
    assert_eq!(a.to_string(), "1*z + 2*z^3 + O(z^5)");
    assert_eq!(TruncatedIntSeries::zero(2).to_string(), "0 + O(z^3)");
}
