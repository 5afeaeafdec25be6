//! Integer polynomials and exact characteristic polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graphs::Graph;

/// Polynomial in `t` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `c · t^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + bigint_f64(c))
    }

    /// Returns `γ` with `self = γ · other` exactly, if one exists.
    pub fn rational_multiple_of(&self, other: &IntPoly) -> Option<BigRational> {
        if other.is_zero() {
            return self.is_zero().then(BigRational::zero);
        }
        let lead = other.degree()?;
        let gamma = BigRational::new(self.coeff(lead), other.coeff(lead));
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .all(|k| BigRational::from_integer(self.coeff(k)) == &gamma * BigRational::from_integer(other.coeff(k)))
            .then_some(gamma)
    }
}

fn bigint_f64(c: &BigInt) -> f64 {
    c.to_string().parse().unwrap_or(f64::NAN)
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}t", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}t^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// `det(tI - A)` for the adjacency matrix of `x`, by Faddeev–LeVerrier
/// over the integers (every division in the recurrence is exact).
pub fn characteristic_polynomial(x: &Graph) -> IntPoly {
    let n = x.n();
    if n == 0 {
        return IntPoly::from_i64(&[1]);
    }
    // coeffs[k] is the coefficient of t^k; c_n = 1
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for k in 1..=n {
        // am = A * M_k
        let am: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        x.neighbors(i).iter().fold(BigInt::zero(), |acc, &l| acc + &m[l][j])
                    })
                    .collect()
            })
            .collect();
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -trace / BigInt::from(k as i64);
        coeffs[n - k] = c.clone();
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    IntPoly::new(coeffs)
}
