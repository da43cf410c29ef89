//! Rational functions in one and two formal variables, kept in canonical form.
//!
//! Canonical form means gcd-reduced with a monic denominator, so equality and
//! zero-testing are structural. That property is what turns the Yang–Baxter
//! and reflection checks into proofs rather than sampling.

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::poly::{Poly, Poly2};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num: Poly::zero(), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, r1) = num.divrem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.divrem(&g);
        debug_assert!(r2.is_zero());
        let lead_inv = den.leading().unwrap().inv().unwrap();
        RatFunc { num: num.scale(&lead_inv), den: den.scale(&lead_inv) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: Gaussian) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn var() -> Self {
        RatFunc { num: Poly::var(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Poly::one() && self.den == Poly::one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// As a polynomial, if the reduced denominator is a constant.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.is_polynomial() {
            Some(self.num.scale(&self.den.coeff(0).inv().unwrap()))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(x);
        if d.norm() < 1e-300 {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_complex(x) / d)
    }

    pub fn eval_exact(&self, x: &Gaussian) -> Result<Gaussian> {
        let d = self.den.eval_exact(x);
        match d.inv() {
            None => Err(Error::Pole),
            Some(dinv) => Ok(&self.num.eval_exact(x) * &dinv),
        }
    }

    /// f(a·x + b).
    pub fn subst_affine(&self, a: &Gaussian, b: &Gaussian) -> Self {
        Self::reduced(self.num.subst_affine(a, b), self.den.subst_affine(a, b))
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd − nd')/d²
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduced(n, &self.den * &self.den)
    }

    pub fn pretty(&self, var: char) -> String {
        if self.den == Poly::one() {
            return self.num.pretty(var);
        }
        let n = self.num.pretty(var);
        let needs_parens = n[1..].contains(['+', '-']) || n.starts_with('-');
        let np = if needs_parens { format!("({n})") } else { n };
        format!("{np}/({})", self.den.pretty(var))
    }

    /// Parse e.g. `(1+2u)/(1-2u)`, `3/5+4/5i`, `-(u^2-1)/(u+i)`.
    pub fn parse(input: &str, var: char) -> Result<Self> {
        Parser::new(input, var)?.parse_all()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        RatFunc::reduced(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::reduced(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFunc::reduced(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty('u'))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty('u'))
    }
}

/// Two-variable rational function; same canonicalization contract as `RatFunc`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc2 {
    num: Poly2,
    den: Poly2,
}

impl RatFunc2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return RatFunc2 { num: Poly2::zero(), den: Poly2::one() };
        }
        let g = Poly2::gcd(&num, &den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let lead = den.leading_v().unwrap().leading().unwrap().inv().unwrap();
        RatFunc2 { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn zero() -> Self {
        RatFunc2 { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc2 { num: p, den: Poly2::one() }
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(u, v);
        if d.norm() < 1e-300 {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_complex(u, v) / d)
    }

    pub fn pretty(&self, u: char, v: char) -> String {
        if self.den == Poly2::one() {
            self.num.pretty(u, v)
        } else {
            format!("({})/({})", self.num.pretty(u, v), self.den.pretty(u, v))
        }
    }
}

impl Add for &RatFunc2 {
    type Output = RatFunc2;
    fn add(self, o: &RatFunc2) -> RatFunc2 {
        RatFunc2::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RatFunc2 {
    type Output = RatFunc2;
    fn sub(self, o: &RatFunc2) -> RatFunc2 {
        RatFunc2::reduced(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Mul for &RatFunc2 {
    type Output = RatFunc2;
    fn mul(self, o: &RatFunc2) -> RatFunc2 {
        RatFunc2::reduced(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RatFunc2 {
    type Output = RatFunc2;
    fn neg(self) -> RatFunc2 {
        RatFunc2 { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Debug for RatFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty('u', 'v'))
    }
}

/// e_x(λ) = (λ + i·x/2)/(λ − i·x/2); the sign convention gives e_{−x} = 1/e_x.
pub fn e_factor(x: &BigRational) -> RatFunc {
    let half = Gaussian::rational_times_i(x / BigRational::from_integer(BigInt::from(2)));
    RatFunc::reduced(
        Poly::from_coeffs(vec![half.clone(), Gaussian::one()]),
        Poly::from_coeffs(vec![-&half, Gaussian::one()]),
    )
}

// ---------------------------------------------------------------------------
// parsing

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    var: char,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, var: char) -> Result<Self> {
        if !input.is_ascii() {
            return Err(Error::Parse("non-ascii input".into()));
        }
        Ok(Parser { bytes: input.as_bytes(), pos: 0, var })
    }

    fn parse_all(&mut self) -> Result<RatFunc> {
        let f = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", self.pos)));
        }
        Ok(f)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    acc = &acc / &d;
                }
                // juxtaposition: "2u", "4/5i", "2(1+u)"
                Some(c) if c == b'(' || c == b'i' || c == self.var as u8 => {
                    acc = &acc * &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc> {
        let base = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                return Ok(-&self.factor()?);
            }
            Some(b'+') => {
                self.pos += 1;
                return self.factor();
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.pos += 1;
                e
            }
            Some(b'i') => {
                self.pos += 1;
                RatFunc::constant(Gaussian::i())
            }
            Some(c) if c == self.var as u8 => {
                self.pos += 1;
                RatFunc::var()
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer {s}")))?;
                RatFunc::constant(Gaussian::from_rational(BigRational::from_integer(n)))
            }
            other => {
                return Err(Error::Parse(format!("unexpected token {other:?}")));
            }
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(Error::Parse("expected exponent".into()));
            }
            let e: i64 = std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse("bad exponent".into()))?;
            return base.pow(e);
        }
        Ok(base)
    }
}

/// Parse an exact scalar such as `1/2`, `3+4i`, `-i`.
pub fn parse_gaussian(s: &str) -> Result<Gaussian> {
    let f = RatFunc::parse(s, 'u')?;
    match (f.num().degree(), f.den().degree()) {
        (None, _) => Ok(Gaussian::zero()),
        (Some(0), Some(0)) => Ok(&f.num().coeff(0) / &f.den().coeff(0)),
        _ => Err(Error::Parse(format!("expected a scalar, got {f}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_cancellation() {
        // (u²−1)/(u−1) → u+1
        let f = RatFunc::parse("(u^2-1)/(u-1)", 'u').unwrap();
        assert_eq!(f, RatFunc::parse("u+1", 'u').unwrap());
        assert!(f.is_polynomial());
    }

    #[test]
    fn self_difference_is_zero() {
        let f = RatFunc::parse("(1+2u)/(1-2u)", 'u').unwrap();
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn e_factor_reciprocal() {
        let x = BigRational::new(3.into(), 2.into());
        let prod = &e_factor(&x) * &e_factor(&(-&x));
        assert!(prod.is_one());
    }

    #[test]
    fn eval_and_poles() {
        let f = RatFunc::parse("(1+u)/(1-u)", 'u').unwrap();
        let v = f.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(f.eval(Complex64::new(1.0, 0.0)), Err(Error::Pole)));
        // e_1(0) = −1
        let e1 = e_factor(&BigRational::from_integer(1.into()));
        let v = e1.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn parse_scalars() {
        assert_eq!(parse_gaussian("3/5+4/5i").unwrap(), {
            let g = Gaussian::new(
                BigRational::new(3.into(), 5.into()),
                BigRational::new(4.into(), 5.into()),
            );
            g
        });
        assert_eq!(parse_gaussian("-i").unwrap(), -&Gaussian::i());
        assert!(parse_gaussian("u+1").is_err());
    }

    #[test]
    fn roundtrip_display() {
        for s in ["(1+2u)/(1-2u)", "u^2+1", "(3/5+4/5i)u", "1/2"] {
            let f = RatFunc::parse(s, 'u').unwrap();
            let g = RatFunc::parse(&f.pretty('u'), 'u').unwrap();
            assert_eq!(f, g, "roundtrip failed for {s}");
        }
    }
}
