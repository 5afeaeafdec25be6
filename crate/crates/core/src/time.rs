//! Exact walk times of the form `r · π^e / √Δ` with `r` rational, `e ∈ {0,1}`
//! and `Δ` square-free, parsed from text such as `pi/sqrt(2)` or `2*pi/3`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedMul, One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::square_free_part;
use crate::error::{Error, Result};

type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkTime {
    coefficient: Q,
    has_pi: bool,
    radicand: u64,
}

impl WalkTime {
    pub const ZERO: WalkTime = WalkTime { coefficient: Q::new_raw(0, 1), has_pi: false, radicand: 1 };

    /// `(num/den) · π / √radicand`
    pub fn pi_over(num: i64, den: i64, radicand: u64) -> Result<Self> {
        if den == 0 || radicand == 0 {
            return Err(Error::InvalidParameter("zero denominator in walk time".into()));
        }
        Self::normalize(Q::new(num, den), true, Q::from_integer(radicand as i64))
    }

    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator in walk time".into()));
        }
        Ok(Self { coefficient: Q::new(num, den), has_pi: false, radicand: 1 })
    }

    /// Canonicalizes `c · π^e / √r` with `r` a positive rational.
    fn normalize(c: Q, has_pi: bool, r: Q) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::ZERO);
        }
        // 1/√(p/q) = √(q/p) = √(p q) / p
        let (p, q) = (*r.numer() as u64, *r.denom() as u64);
        let pq = p.checked_mul(q).ok_or(Error::Overflow("walk time radicand"))?;
        let (delta, m) = square_free_part(pq)?;
        // √(pq) = m √Δ, so 1/√r = m √Δ / p = (m Δ / p) / √Δ
        let scale = Q::new((m * delta) as i64, p as i64);
        Ok(Self { coefficient: c * scale, has_pi, radicand: delta })
    }

    pub fn coefficient(&self) -> Q {
        self.coefficient
    }

    pub fn has_pi(&self) -> bool {
        self.has_pi
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn scale(&self, factor: i64) -> Self {
        Self { coefficient: self.coefficient * factor, ..*self }
    }

    pub fn to_f64(&self) -> f64 {
        let c = *self.coefficient.numer() as f64 / *self.coefficient.denom() as f64;
        let pi = if self.has_pi { std::f64::consts::PI } else { 1.0 };
        c * pi / (self.radicand as f64).sqrt()
    }
}

impl fmt::Display for WalkTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient.is_zero() {
            return write!(f, "0");
        }
        let num = *self.coefficient.numer();
        let den = *self.coefficient.denom();
        let mut s = String::new();
        if num < 0 {
            s.push('-');
        }
        let abs = num.abs();
        match (self.has_pi, abs) {
            (true, 1) => s.push_str("pi"),
            (true, _) => s.push_str(&format!("{abs}*pi")),
            (false, _) => s.push_str(&abs.to_string()),
        }
        match (den, self.radicand) {
            (1, 1) => {}
            (d, 1) => s.push_str(&format!("/{d}")),
            (1, r) => s.push_str(&format!("/sqrt({r})")),
            (d, r) => s.push_str(&format!("/({d}*sqrt({r}))")),
        }
        write!(f, "{s}")
    }
}

impl Serialize for WalkTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Intermediate value `c · π^e · r^(1/2)` used while parsing.
#[derive(Clone, Copy)]
struct Term {
    c: Q,
    pi: i32,
    root: Q,
}

impl Term {
    fn num(c: Q) -> Self {
        Term { c, pi: 0, root: Q::one() }
    }
    fn mul(self, o: Term) -> Result<Term> {
        Ok(Term { c: checked(self.c, o.c, |a, b| a.checked_mul(&b))?, pi: self.pi + o.pi, root: checked(self.root, o.root, |a, b| a.checked_mul(&b))? })
    }
    fn recip(self) -> Result<Term> {
        if self.c.is_zero() {
            return Err(Error::Parse("division by zero in time expression".into()));
        }
        Ok(Term { c: self.c.recip(), pi: -self.pi, root: self.root.recip() })
    }
}

fn checked(a: Q, b: Q, f: impl Fn(Q, Q) -> Option<Q>) -> Result<Q> {
    f(a, b).ok_or(Error::Overflow("time expression"))
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.s[self.i..].starts_with(word.as_bytes()) {
            self.i += word.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at byte {} of time expression", self.i)))
    }

    // expr := ['-'] factor (('*' | '/')? factor)*
    fn expr(&mut self) -> Result<Term> {
        let negative = self.eat("-");
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = acc.mul(self.factor()?)?;
                }
                Some(b'/') => {
                    self.i += 1;
                    acc = acc.mul(self.factor()?.recip()?)?;
                }
                // implicit product such as `2pi` or `pi sqrt(2)`
                Some(b) if b.is_ascii_alphanumeric() || b == b'(' || b == b'.' => {
                    acc = acc.mul(self.factor()?)?;
                }
                _ => break,
            }
        }
        if negative {
            acc.c = -acc.c;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term> {
        if self.eat("pi") || self.eat("π") {
            return Ok(Term { c: Q::one(), pi: 1, root: Q::one() });
        }
        if self.eat("sqrt(") || self.eat("√(") {
            let inner = self.expr()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            if inner.pi != 0 || inner.root != Q::one() || inner.c.is_negative() {
                return self.err("sqrt accepts a nonnegative rational only");
            }
            return Ok(Term { c: Q::one(), pi: 0, root: inner.c });
        }
        if self.eat("(") {
            let inner = self.expr()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(inner);
        }
        self.number()
    }

    fn number(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
            self.i += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
        if text.is_empty() {
            return self.err("expected a number, pi or sqrt(...)");
        }
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        let digits = format!("{int}{frac}");
        let num: i64 = digits.parse().map_err(|_| Error::Parse(format!("bad number {text:?}")))?;
        let den = 10i64.checked_pow(frac.len() as u32).ok_or(Error::Overflow("decimal literal"))?;
        Ok(Term::num(Q::new(num, den)))
    }
}

impl FromStr for WalkTime {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parser = Parser { s: text.trim().as_bytes(), i: 0 };
        let term = parser.expr()?;
        if parser.peek().is_some() {
            return parser.err("trailing input");
        }
        if term.c.is_zero() {
            return Ok(Self::ZERO);
        }
        if !(0..=1).contains(&term.pi) {
            return Err(Error::Parse("only first powers of pi are supported".into()));
        }
        if term.root.is_zero() {
            return Ok(Self::ZERO);
        }
        // c · √root = c · root / √root
        let c = term.c * term.root;
        Self::normalize(c, term.pi == 1, term.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn t(s: &str) -> WalkTime {
        s.parse().unwrap()
    }

    #[test]
    fn parses_paper_style_times() {
        assert_eq!(t("pi"), WalkTime::pi_over(1, 1, 1).unwrap());
        assert_eq!(t("pi/sqrt(2)"), WalkTime::pi_over(1, 1, 2).unwrap());
        assert_eq!(t("2*pi/sqrt(5)"), WalkTime::pi_over(2, 1, 5).unwrap());
        assert_eq!(t("2pi/3"), WalkTime::pi_over(2, 3, 1).unwrap());
        assert_eq!(t("pi / 2"), WalkTime::pi_over(1, 2, 1).unwrap());
        assert_eq!(t("3*pi/(2*sqrt(5))"), WalkTime::pi_over(3, 2, 5).unwrap());
        assert_eq!(t("π/√(3)"), WalkTime::pi_over(1, 1, 3).unwrap());
    }

    #[test]
    fn canonical_radicands() {
        // π/√8 = π/(2√2)
        assert_eq!(t("pi/sqrt(8)"), WalkTime::pi_over(1, 2, 2).unwrap());
        // π·√2 = 2π/√2
        assert_eq!(t("pi*sqrt(2)"), WalkTime::pi_over(2, 1, 2).unwrap());
        assert_eq!(t("pi/sqrt(1/2)"), t("pi*sqrt(2)"));
        assert_eq!(t("pi/sqrt(4)"), t("pi/2"));
    }

    #[test]
    fn numeric_values() {
        assert!((t("pi/sqrt(2)").to_f64() - PI / 2f64.sqrt()).abs() < 1e-15);
        assert!((t("0.25").to_f64() - 0.25).abs() < 1e-15);
        assert!((t("1.5*pi").to_f64() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(t("0"), WalkTime::ZERO);
        assert!((t("-pi").to_f64() + PI).abs() < 1e-15);
    }

    #[test]
    fn display_round_trips() {
        for s in ["pi", "pi/sqrt(2)", "2*pi/3", "pi/(2*sqrt(5))", "3/4", "-pi/5", "0"] {
            assert_eq!(t(s).to_string(), s);
            assert_eq!(t(&t(s).to_string()), t(s));
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "pi pi pi2^", "sqrt(pi)", "pi*pi", "1/0", "sqrt(2", "e"] {
            assert!(s.parse::<WalkTime>().is_err(), "{s}");
        }
    }
}
