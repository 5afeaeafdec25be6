//! Integer utilities: square-free parts, 2-adic valuations, gcds, integer
//! square roots, primality and rational reconstruction.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Writes `n = delta * m^2` with `delta` square-free.
pub fn square_free_part(n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("square-free part of 0 is undefined".into()));
    }
    let mut rest = n;
    let mut delta = 1u64;
    let mut m = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        m *= p.pow(e / 2);
        if e % 2 == 1 {
            delta *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // whatever is left is a prime to the first power
    delta *= rest;
    Ok((delta, m))
}

pub fn is_square_free(n: u64) -> bool {
    matches!(square_free_part(n), Ok((_, 1)))
}

/// Largest `e` with `2^e | n`.
pub fn two_adic_valuation(n: i64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParameter("2-adic valuation of 0 is undefined".into()));
    }
    Ok(n.trailing_zeros())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes a prime `p ≡ 1 (mod 4)` as `f^2 + g^2` with `f > g > 0`.
pub fn two_squares(p: u64) -> Result<(u64, u64)> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidParameter(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    for g in 1..=isqrt(p / 2) {
        if let Some(f) = exact_sqrt(p - g * g) {
            if f > g {
                return Ok((f, g));
            }
        }
    }
    unreachable!("Fermat decomposition exists for every prime 1 mod 4")
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions. Returns `None` when the residual exceeds `tol`.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut frac = x;
    let mut best = None;
    for _ in 0..64 {
        let a = frac.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0));
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0));
        let (Some(h2), Some(k2)) = (h2, k2) else { break };
        if k2 > max_den {
            break;
        }
        best = Some(Rational::new(h2, k2));
        if (x - h2 as f64 / k2 as f64).abs() < tol * 1e-3 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = frac - a as f64;
        if rem.abs() < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
    }
    best.filter(|r| (x - rational_to_f64(r)).abs() < tol)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Distance from `x` to the nearest integer.
pub fn integrality_gap(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_examples() {
        assert_eq!(square_free_part(1).unwrap(), (1, 1));
        assert_eq!(square_free_part(18).unwrap(), (2, 3));
        assert_eq!(square_free_part(100).unwrap(), (1, 10));
        assert_eq!(square_free_part(8).unwrap(), (2, 2));
        assert_eq!(square_free_part(97).unwrap(), (97, 1));
        assert!(square_free_part(0).is_err());
    }

    #[test]
    fn square_free_brute_force() {
        for n in 1..2000u64 {
            let (d, m) = square_free_part(n).unwrap();
            assert_eq!(d * m * m, n);
            // no square of a prime divides d
            assert!((2..=d).all(|q| d % (q * q) != 0), "{n}");
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(two_adic_valuation(5).unwrap(), 0);
        assert_eq!(two_adic_valuation(10).unwrap(), 1);
        assert_eq!(two_adic_valuation(8).unwrap(), 3);
        assert_eq!(two_adic_valuation(-12).unwrap(), 2);
        assert!(two_adic_valuation(0).is_err());
    }

    #[test]
    fn fermat() {
        assert_eq!(two_squares(5).unwrap(), (2, 1));
        assert_eq!(two_squares(13).unwrap(), (3, 2));
        assert_eq!(two_squares(17).unwrap(), (4, 1));
        assert_eq!(two_squares(29).unwrap(), (5, 2));
        assert!(two_squares(6).is_err());
        assert!(two_squares(7).is_err());
    }

    #[test]
    fn rational_reconstruction() {
        assert_eq!(rational_approx(-1.5, 1_000_000, 1e-7), Some(Rational::new(-3, 2)));
        assert_eq!(rational_approx(0.0, 1_000_000, 1e-7), Some(Rational::new(0, 1)));
        assert_eq!(rational_approx(22.0 / 7.0, 1_000_000, 1e-7), Some(Rational::new(22, 7)));
        assert_eq!(rational_approx(2f64.sqrt(), 100, 1e-7), None);
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..5000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(exact_sqrt(5625), Some(75));
        assert_eq!(exact_sqrt(12025), None);
    }
}
