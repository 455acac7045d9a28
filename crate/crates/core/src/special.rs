//! Riemann zeta at integers and gamma at half-integers, to double precision.

use core::f64::consts::PI;

// B_{2j} / (2j)! for j = 1..6
const BERNOULLI_OVER_FACT: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// `zeta(s)` for integer `s >= 2`, by Euler–Maclaurin summation.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta pole at s = 1");
    const N: usize = 16;
    let sf = s as f64;
    let nf = N as f64;
    let mut sum = 0.0;
    // smallest terms first
    for k in (1..N).rev() {
        sum += libm::pow(k as f64, -sf);
    }
    sum += libm::pow(nf, 1.0 - sf) / (sf - 1.0);
    sum += 0.5 * libm::pow(nf, -sf);
    // rising factorial s (s+1) ... (s+2j-2) times N^(-s-2j+1)
    let mut rising = sf;
    let mut power = libm::pow(nf, -sf - 1.0);
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if j > 0 {
            let a = sf + (2 * j - 1) as f64;
            rising *= a * (a + 1.0);
            power /= nf * nf;
        }
        sum += b * rising * power;
    }
    sum
}

/// `Gamma(r / 2)` for integer `r >= 1`.
pub fn gamma_half(r: u32) -> f64 {
    assert!(r >= 1, "gamma pole at 0");
    // start at Gamma(1) or Gamma(1/2) and step by one
    let (mut x, mut g) = if r % 2 == 0 { (1.0, 1.0) } else { (0.5, libm::sqrt(PI)) };
    let target = r as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4) - libm::pow(PI, 4.0) / 90.0).abs() < 1e-14);
        assert!((zeta(3) - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!((zeta(6) - libm::pow(PI, 6.0) / 945.0).abs() < 1e-14);
        assert!((zeta(40) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma_half(2), 1.0);
        assert_eq!(gamma_half(4), 1.0);
        assert_eq!(gamma_half(8), 6.0);
        assert!((gamma_half(1) - libm::sqrt(PI)).abs() < 1e-15);
        assert!((gamma_half(3) - 0.5 * libm::sqrt(PI)).abs() < 1e-15);
        assert!((gamma_half(7) - 3.323_350_970_447_843).abs() < 1e-13);
    }
}
