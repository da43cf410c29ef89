//! Exact Gaussian rationals a + b·i with big-integer rational parts.
//!
//! This is the coefficient field for every symbolic computation in the crate.
//! Fixed-width integers overflow already for two-site chains, so everything
//! is `BigRational` underneath.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn zero() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Gaussian::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Gaussian::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// num/den as a real rational.
    pub fn rat(num: i64, den: i64) -> Self {
        assert!(den != 0, "rat: zero denominator");
        Gaussian::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// (num/den)·i.
    pub fn rat_i(num: i64, den: i64) -> Self {
        assert!(den != 0, "rat_i: zero denominator");
        Gaussian::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        Gaussian::new(r, BigRational::zero())
    }

    /// r·i for rational r.
    pub fn rational_times_i(r: BigRational) -> Self {
        Gaussian::new(BigRational::zero(), r)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus as a rational (re² + im²).
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Gaussian::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("pow of zero with negative exponent").pow(-e);
        }
        let mut acc = Gaussian::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for &Gaussian {
    type Output = Gaussian;
    fn div(self, o: &Gaussian) -> Gaussian {
        self * &o.inv().expect("Gaussian division by zero")
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.re.is_zero() {
            parts.push(fmt_rational(&self.re));
        }
        if !self.im.is_zero() {
            let mag = self.im.abs();
            let unit = if mag.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&mag))
            };
            if self.im.is_negative() {
                parts.push(format!("-{unit}"));
            } else if parts.is_empty() {
                parts.push(unit);
            } else {
                parts.push(format!("+{unit}"));
            }
        }
        write!(f, "{}", parts.concat())
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
