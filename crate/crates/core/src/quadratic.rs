//! Exact arithmetic in Q(√Δ) for a fixed square-free radicand Δ.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::arith::square_free_part;
use crate::error::{Error, Result};

pub type BigRatio = Ratio<i128>;

/// `p + q·√Δ` with `p, q` rational and `Δ` square-free.
///
/// Values with `q = 0` are rational and combine with any radicand. Mixing two
/// genuinely irrational values over different radicands panics in the operator
/// impls; use [`QuadraticValue::compatible`] to check first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    p: BigRatio,
    q: BigRatio,
    radicand: u64,
}

impl QuadraticValue {
    pub fn new(p: BigRatio, q: BigRatio, radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Ok(Self::rational(p));
        }
        let (_, m) = square_free_part(radicand)?;
        if m != 1 {
            return Err(Error::InvalidParameter(format!("radicand {radicand} is not square-free")));
        }
        Ok(Self::normalized(p, q, radicand))
    }

    fn normalized(p: BigRatio, q: BigRatio, radicand: u64) -> Self {
        if radicand == 1 {
            Self { p: p + q, q: BigRatio::zero(), radicand: 1 }
        } else if q.is_zero() {
            Self { p, q, radicand: 1 }
        } else {
            Self { p, q, radicand }
        }
    }

    pub fn rational(p: BigRatio) -> Self {
        Self { p, q: BigRatio::zero(), radicand: 1 }
    }

    pub fn integer(n: i128) -> Self {
        Self::rational(BigRatio::from_integer(n))
    }

    pub fn from_fraction(num: i128, den: i128) -> Self {
        Self::rational(BigRatio::new(num, den))
    }

    /// `√n` for a nonnegative integer `n`, written as `m·√Δ`.
    pub fn sqrt_of(n: u64) -> Self {
        if n == 0 {
            return Self::integer(0);
        }
        let (delta, m) = square_free_part(n).expect("n > 0");
        Self::normalized(BigRatio::zero(), BigRatio::from_integer(m as i128), delta)
    }

    pub fn rational_part(&self) -> BigRatio {
        self.p
    }

    pub fn surd_coefficient(&self) -> BigRatio {
        self.q
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRatio> {
        self.is_rational().then_some(self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.radicand == other.radicand || self.is_rational() || other.is_rational()
    }

    fn joint_radicand(&self, other: &Self) -> u64 {
        assert!(
            self.compatible(other),
            "incompatible radicands {} and {}",
            self.radicand,
            other.radicand
        );
        self.radicand.max(other.radicand)
    }

    pub fn conjugate(&self) -> Self {
        Self { p: self.p, q: -self.q, radicand: self.radicand }
    }

    /// Field norm `p^2 - q^2 Δ`.
    pub fn norm(&self) -> BigRatio {
        self.p * self.p - self.q * self.q * BigRatio::from_integer(self.radicand as i128)
    }

    pub fn signum(&self) -> i32 {
        // sign of p + q√Δ decided by comparing p^2 with q^2 Δ
        let sp = sign_of(&self.p);
        let sq = sign_of(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        match self.norm().cmp(&BigRatio::zero()) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        ratio_f64(&self.p) + ratio_f64(&self.q) * (self.radicand as f64).sqrt()
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        Ok(Self::normalized(self.p / n, -self.q / n, self.radicand))
    }
}

fn sign_of(r: &BigRatio) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn ratio_f64(r: &BigRatio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Add for QuadraticValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.joint_radicand(&rhs);
        Self::normalized(self.p + rhs.p, self.q + rhs.q, d)
    }
}

impl Sub for QuadraticValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadraticValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self { p: -self.p, q: -self.q, radicand: self.radicand }
    }
}

impl Mul for QuadraticValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.joint_radicand(&rhs);
        let dd = BigRatio::from_integer(d as i128);
        Self::normalized(
            self.p * rhs.p + self.q * rhs.q * dd,
            self.p * rhs.q + self.q * rhs.p,
            d,
        )
    }
}

impl Div for QuadraticValue {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip().expect("division by zero quadratic value")
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.compatible(other) {
            return self.to_f64().partial_cmp(&other.to_f64());
        }
        Some((*self - *other).signum().cmp(&0))
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let q = if self.q.is_one() { String::new() } else { format!("{}*", self.q.abs()) };
        if self.p.is_zero() {
            let sign = if self.q.is_negative() { "-" } else { "" };
            write!(f, "{sign}{q}sqrt({})", self.radicand)
        } else {
            let sign = if self.q.is_negative() { "-" } else { "+" };
            let q = if self.q.abs().is_one() { String::new() } else { q };
            write!(f, "{} {sign} {q}sqrt({})", self.p, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> BigRatio {
        BigRatio::new(n, d)
    }

    #[test]
    fn radicand_one_folds() {
        let v = QuadraticValue::new(r(1, 2), r(3, 1), 1).unwrap();
        assert!(v.is_rational());
        assert_eq!(v.rational_part(), r(7, 2));
    }

    #[test]
    fn rejects_non_square_free() {
        assert!(QuadraticValue::new(r(0, 1), r(1, 1), 8).is_err());
    }

    #[test]
    fn sqrt_extraction() {
        let s = QuadraticValue::sqrt_of(18);
        assert_eq!(s.radicand(), 2);
        assert_eq!(s.surd_coefficient(), r(3, 1));
        assert_eq!(QuadraticValue::sqrt_of(25), QuadraticValue::integer(5));
        assert_eq!((s * s).as_rational(), Some(r(18, 1)));
    }

    #[test]
    fn field_ops() {
        let a = QuadraticValue::new(r(1, 1), r(1, 1), 2).unwrap();
        let b = a.recip().unwrap();
        // (1 + √2)^{-1} = √2 - 1
        assert_eq!(b, QuadraticValue::new(r(-1, 1), r(1, 1), 2).unwrap());
        assert_eq!((a * b).as_rational(), Some(r(1, 1)));
        assert!((a.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn exact_sign() {
        let v = QuadraticValue::new(r(3, 1), r(-2, 1), 2).unwrap(); // 3 - 2√2 > 0
        assert_eq!(v.signum(), 1);
        let w = QuadraticValue::new(r(-3, 1), r(2, 1), 3).unwrap(); // -3 + 2√3 > 0
        assert_eq!(w.signum(), 1);
        assert_eq!((-w).signum(), -1);
        assert!(QuadraticValue::integer(2) > QuadraticValue::sqrt_of(3));
    }

    #[test]
    fn rendering() {
        assert_eq!(QuadraticValue::new(r(1, 4), r(-3, 20), 5).unwrap().to_string(), "1/4 - 3/20*sqrt(5)");
        assert_eq!(QuadraticValue::sqrt_of(2).to_string(), "sqrt(2)");
        assert_eq!(QuadraticValue::from_fraction(2, 10).to_string(), "1/5");
    }
}
