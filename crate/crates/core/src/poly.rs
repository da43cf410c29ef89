//! Dense polynomials over the Gaussian rationals, in one and two variables.
//!
//! Degrees in this crate stay tiny (a two-site transfer matrix tops out around
//! degree ten), so the representation is a plain coefficient vector; the
//! two-variable form is recursive dense: a polynomial in `v` whose
//! coefficients are polynomials in `u`.

use crate::gaussian::Gaussian;
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial, coefficients by ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Gaussian>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Gaussian>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Gaussian::one())
    }

    pub fn constant(c: Gaussian) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![Gaussian::zero(), Gaussian::one()])
    }

    /// a·x + b.
    pub fn affine(a: Gaussian, b: Gaussian) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Gaussian> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Gaussian {
        self.coeffs.get(k).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul_var_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Gaussian::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; coefficients form a field so this is exact.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let dlead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![Gaussian::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.coeffs[rd] * &dlead_inv;
            quo[rd - dd] = c.clone();
            // rem -= c x^{rd-dd} d
            for (k, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                let idx = rd - dd + k;
                rem.coeffs[idx] = &rem.coeffs[idx] - &t;
            }
            while rem.coeffs.last().map_or(false, |c| c.is_zero()) {
                rem.coeffs.pop();
            }
        }
        (Poly::from_coeffs(quo), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Normalize so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    pub fn eval_exact(&self, x: &Gaussian) -> Gaussian {
        let mut acc = Gaussian::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// p(a·x + b).
    pub fn subst_affine(&self, a: &Gaussian, b: &Gaussian) -> Poly {
        let arg = Poly::affine(a.clone(), b.clone());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &arg) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Gaussian::from_int((k + 1) as i64))
                .collect(),
        )
    }

    pub fn pretty(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                _ => {
                    let pow = if k == 1 {
                        format!("{var}")
                    } else {
                        format!("{var}^{k}")
                    };
                    if c.is_one() {
                        pow
                    } else if (-c).is_one() {
                        format!("-{pow}")
                    } else if c.is_real() || c.re.numer().sign() == num_bigint::Sign::NoSign {
                        format!("{c}{pow}")
                    } else {
                        format!("({c}){pow}")
                    }
                }
            };
            if out.is_empty() {
                out = term;
            } else if term.starts_with('-') {
                out = format!("{out}{term}");
            } else {
                out = format!("{out}+{term}");
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &o.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &o.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Gaussian::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty('x'))
    }
}

/// Bivariate polynomial: coefficients of v^k are `Poly` in u.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    pub coeffs: Vec<Poly>,
}

impl Poly2 {
    pub fn from_coeffs(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly2 { coeffs }
    }

    pub fn zero() -> Self {
        Poly2 { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly2::constant(Gaussian::one())
    }

    pub fn constant(c: Gaussian) -> Self {
        Poly2::from_coeffs(vec![Poly::constant(c)])
    }

    pub fn var_u() -> Self {
        Poly2::from_coeffs(vec![Poly::var()])
    }

    pub fn var_v() -> Self {
        Poly2::from_coeffs(vec![Poly::zero(), Poly::one()])
    }

    /// Lift a polynomial in u.
    pub fn from_u(p: Poly) -> Self {
        Poly2::from_coeffs(vec![p])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_v(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg_u(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    pub fn coeff_v(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn leading_v(&self) -> Option<&Poly> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Poly2::from_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        Poly2::from_coeffs(self.coeffs.iter().map(|q| q * p).collect())
    }

    pub fn eval_complex(&self, u: Complex64, v: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c.eval_complex(u);
        }
        acc
    }

    pub fn eval_exact(&self, u: &Gaussian, v: &Gaussian) -> Gaussian {
        let mut acc = Gaussian::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + &c.eval_exact(u);
        }
        acc
    }

    /// Content: gcd of the u-coefficients.
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.monic() } else { Poly::gcd(&g, c) };
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by a u-polynomial that divides exactly.
    fn div_exact_u(&self, d: &Poly) -> Poly2 {
        Poly2::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.divrem(d);
                    debug_assert!(r.is_zero(), "non-exact content division");
                    q
                })
                .collect(),
        )
    }

    pub fn primitive_part(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let c = self.content();
        self.div_exact_u(&c)
    }

    /// Pseudo-remainder of self by d in the variable v.
    fn prem_v(&self, d: &Poly2) -> Poly2 {
        let dd = d.deg_v().expect("prem by zero");
        let lead = d.leading_v().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.deg_v() {
            if rd < dd {
                break;
            }
            // r = lead·r − r_lead·v^{rd−dd}·d
            let rl = r.leading_v().unwrap().clone();
            let shifted = Poly2::from_coeffs({
                let mut cs = vec![Poly::zero(); rd - dd];
                cs.extend(d.coeffs.iter().map(|c| c * &rl));
                cs
            });
            r = &r.scale_poly(&lead) - &shifted;
            assert!(r.deg_v().map_or(true, |x| x < rd), "prem_v failed to reduce degree");
        }
        r
    }

    /// Gcd over Q(i)[u][v] by primitive-part Euclid in v.
    pub fn gcd(a: &Poly2, b: &Poly2) -> Poly2 {
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        let ca = a.content();
        let cb = b.content();
        let cg = Poly::gcd(&ca, &cb);
        let (mut p, mut q) = (a.primitive_part(), b.primitive_part());
        if p.deg_v() < q.deg_v() {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            if q.is_zero() {
                break;
            }
            if q.deg_v() == Some(0) {
                // primitive degree-0 in v: gcd of primitive parts is 1
                p = Poly2::one();
                break;
            }
            let r = p.prem_v(&q);
            p = q;
            q = if r.is_zero() { Poly2::zero() } else { r.primitive_part() };
        }
        p.scale_poly(&cg).normalized()
    }

    /// Exact division when the divisor divides; used after gcd extraction.
    pub fn div_exact(&self, d: &Poly2) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        if d.deg_v() == Some(0) {
            return self.div_exact_u(&d.coeffs[0]);
        }
        // long division in v over the fraction field of Q(i)[u]; exactness of the
        // inputs guarantees polynomial quotients here
        let dd = d.deg_v().unwrap();
        let lead = d.leading_v().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![Poly::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.deg_v() {
            if rd < dd {
                break;
            }
            let (c, r) = rem.leading_v().unwrap().divrem(lead);
            assert!(r.is_zero(), "div_exact: leading coefficient does not divide");
            quo[rd - dd] = c.clone();
            let shifted = Poly2::from_coeffs({
                let mut cs = vec![Poly::zero(); rd - dd];
                cs.extend(d.coeffs.iter().map(|dc| dc * &c));
                cs
            });
            rem = &rem - &shifted;
            assert!(rem.deg_v().map_or(true, |x| x < rd), "div_exact did not reduce");
        }
        assert!(rem.is_zero(), "div_exact: nonzero remainder");
        Poly2::from_coeffs(quo)
    }

    /// Scale so the leading Gaussian of the leading v-coefficient is 1.
    pub fn normalized(&self) -> Poly2 {
        match self.leading_v().and_then(|p| p.leading()) {
            None => Poly2::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn pretty(&self, u: char, v: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.pretty(u);
            let term = match k {
                0 => cs,
                _ => {
                    let pow = if k == 1 { format!("{v}") } else { format!("{v}^{k}") };
                    if cs == "1" {
                        pow
                    } else {
                        format!("({cs}){pow}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff_v(k) + &o.coeff_v(k));
        }
        Poly2::from_coeffs(coeffs)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff_v(k) - &o.coeff_v(k));
        }
        Poly2::from_coeffs(coeffs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        if self.is_zero() || o.is_zero() {
            return Poly2::zero();
        }
        let mut coeffs = vec![Poly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly2::from_coeffs(coeffs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty('u', 'v'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> Gaussian {
        Gaussian::from_int(n)
    }

    #[test]
    fn divrem_roundtrip() {
        // (x²−1) = (x−1)(x+1)
        let num = Poly::from_coeffs(vec![g(-1), g(0), g(1)]);
        let den = Poly::from_coeffs(vec![g(-1), g(1)]);
        let (q, r) = num.divrem(&den);
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_coeffs(vec![g(1), g(1)]));
    }

    #[test]
    fn gcd_univariate() {
        let a = Poly::from_coeffs(vec![g(-1), g(0), g(1)]); // x²−1
        let b = Poly::from_coeffs(vec![g(1), g(2), g(1)]); // (x+1)²
        let gg = Poly::gcd(&a, &b);
        assert_eq!(gg, Poly::from_coeffs(vec![g(1), g(1)]));
    }

    #[test]
    fn gcd_bivariate() {
        // (u+v)·(u−v) and (u+v)·v share the factor u+v
        let upv = &Poly2::var_u() + &Poly2::var_v();
        let umv = &Poly2::var_u() - &Poly2::var_v();
        let a = &upv * &umv;
        let b = &upv * &Poly2::var_v();
        let gg = Poly2::gcd(&a, &b);
        assert_eq!(gg, upv.normalized());
        // cofactors divide exactly
        assert_eq!(a.div_exact(&gg), umv);
    }

    #[test]
    fn subst_affine_matches_eval() {
        let p = Poly::from_coeffs(vec![g(2), g(-3), g(1)]);
        let q = p.subst_affine(&Gaussian::from_int(-1), &Gaussian::rat_i(-1, 2)); // p(−x − i/2)
        let x = Gaussian::rat(3, 7);
        let lhs = q.eval_exact(&x);
        let arg = &(-&x) + &Gaussian::rat_i(-1, 2);
        assert_eq!(lhs, p.eval_exact(&arg));
    }
}
