//! Sparse matrices over a graded tensor space, with the Koszul signs of the
//! graded tensor product baked into the matrix representation.
//!
//! With the convention used here, the matrix of a ⊗ b acting on column
//! vectors is (a ⊗ b)_{(i,j),(k,l)} = (−1)^{([j]+[l])[k]} a_{ik} b_{jl}, so
//! products of represented operators are ordinary matrix products and the
//! rule (a⊗b)(c⊗d) = (−1)^{[b][c]} ac ⊗ bd holds for homogeneous entries.

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::grading::GradingSpec;
use crate::poly::{Poly, Poly2};
use crate::ratfunc::{RatFunc, RatFunc2};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

/// Minimal ring interface for matrix entries.
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn is_ring_zero(&self) -> bool;
}

macro_rules! impl_ring_by_refops {
    ($t:ty, $zero:expr, $one:expr) => {
        impl Ring for $t {
            fn ring_zero() -> Self {
                $zero
            }
            fn ring_one() -> Self {
                $one
            }
            fn radd(&self, o: &Self) -> Self {
                self + o
            }
            fn rsub(&self, o: &Self) -> Self {
                self - o
            }
            fn rmul(&self, o: &Self) -> Self {
                self * o
            }
            fn rneg(&self) -> Self {
                -self
            }
            fn is_ring_zero(&self) -> bool {
                self.is_zero()
            }
        }
    };
}

impl_ring_by_refops!(Gaussian, Gaussian::zero(), Gaussian::one());
impl_ring_by_refops!(Poly, Poly::zero(), Poly::one());
impl_ring_by_refops!(Poly2, Poly2::zero(), Poly2::one());
impl_ring_by_refops!(RatFunc, RatFunc::zero(), RatFunc::one());

impl Ring for RatFunc2 {
    fn ring_zero() -> Self {
        RatFunc2::zero()
    }
    fn ring_one() -> Self {
        RatFunc2::from_poly(Poly2::one())
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for Complex64 {
    fn ring_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn ring_one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn is_ring_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// Square sparse matrix on `factors` graded tensor copies of the vector space.
#[derive(Clone, PartialEq)]
pub struct GMat<T: Ring> {
    pub spec: Arc<GradingSpec>,
    pub factors: usize,
    pub dim: usize,
    entries: BTreeMap<(usize, usize), T>,
}

fn apply_sign<T: Ring>(sign_odd: bool, v: T) -> T {
    if sign_odd {
        v.rneg()
    } else {
        v
    }
}

impl<T: Ring> GMat<T> {
    pub fn zero(spec: Arc<GradingSpec>, factors: usize) -> Self {
        let dim = spec.dim().pow(factors as u32);
        GMat { spec, factors, dim, entries: BTreeMap::new() }
    }

    pub fn identity(spec: Arc<GradingSpec>, factors: usize) -> Self {
        let mut m = GMat::zero(spec, factors);
        for i in 0..m.dim {
            m.entries.insert((i, i), T::ring_one());
        }
        m
    }

    /// Elementary one-factor matrix E_{ij} (0-based indices).
    pub fn elementary(spec: Arc<GradingSpec>, i: usize, j: usize) -> Self {
        let mut m = GMat::zero(spec, 1);
        m.entries.insert((i, j), T::ring_one());
        m
    }

    pub fn from_diagonal(spec: Arc<GradingSpec>, diag: Vec<T>) -> Self {
        assert_eq!(diag.len(), spec.dim());
        let mut m = GMat::zero(spec, 1);
        for (i, v) in diag.into_iter().enumerate() {
            if !v.is_ring_zero() {
                m.entries.insert((i, i), v);
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::ring_zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_ring_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &T) {
        if v.is_ring_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur.radd(v));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = GMat::zero(self.spec.clone(), self.factors);
        for (&(r, c), v) in &self.entries {
            let w = v.rmul(s);
            if !w.is_ring_zero() {
                out.entries.insert((r, c), w);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.rneg();
        }
        out
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> GMat<U> {
        let mut out = GMat::zero(self.spec.clone(), self.factors);
        for (&(r, c), v) in &self.entries {
            let w = f(v);
            if !w.is_ring_zero() {
                out.entries.insert((r, c), w);
            }
        }
        out
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        if self.spec.as_ref() != o.spec.as_ref() {
            return Err(Error::SpecMismatch);
        }
        if self.factors != o.factors {
            return Err(Error::Shape(format!(
                "factor counts differ: {} vs {}",
                self.factors, o.factors
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for (&(r, c), v) in &o.entries {
            out.add_to(r, c, v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for (&(r, c), v) in &o.entries {
            out.add_to(r, c, &v.rneg());
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        let mut out = GMat::zero(self.spec.clone(), self.factors);
        for (&(r, k), a) in &self.entries {
            for (&(_, c), b) in o.entries.range((k, 0)..=(k, o.dim - 1)) {
                let t = a.rmul(b);
                out.add_to(r, c, &t);
            }
        }
        Ok(out)
    }

    /// Graded tensor product; factor counts add.
    pub fn graded_kron(&self, o: &Self) -> Result<Self> {
        if self.spec.as_ref() != o.spec.as_ref() {
            return Err(Error::SpecMismatch);
        }
        let spec = self.spec.clone();
        let mut out = GMat::zero(spec.clone(), self.factors + o.factors);
        let od = o.dim;
        for (&(i, k), a) in &self.entries {
            let gk = spec.composite_grade(k, self.factors);
            for (&(j, l), b) in &o.entries {
                let gb = spec.composite_grade(j, o.factors) ^ spec.composite_grade(l, o.factors);
                let sign_odd = gb & gk == 1;
                let v = apply_sign(sign_odd, a.rmul(b));
                out.add_to(i * od + j, k * od + l, &v);
            }
        }
        Ok(out)
    }

    /// Super transposition on a one-factor matrix:
    /// A^t = Σ (−1)^{[i][j]+[j]} θ_i θ_j A^{ij} E_{j̄ī}.
    pub fn super_transpose(&self) -> Result<Self> {
        if self.factors != 1 {
            return Err(Error::Shape("super_transpose expects a one-factor matrix".into()));
        }
        let spec = self.spec.clone();
        let mut out = GMat::zero(spec.clone(), 1);
        for (&(i, j), a) in &self.entries {
            let gi = spec.grade(i);
            let gj = spec.grade(j);
            let mut neg = (gi & gj) ^ gj == 1;
            if spec.theta(i) * spec.theta(j) == -1 {
                neg = !neg;
            }
            out.add_to(spec.bar(j), spec.bar(i), &apply_sign(neg, a.clone()));
        }
        Ok(out)
    }

    /// Super transposition in one factor of a two-factor matrix (t₁ or t₂).
    pub fn super_transpose_factor(&self, factor: usize) -> Result<Self> {
        if self.factors != 2 || factor > 1 {
            return Err(Error::Shape("partial transposition needs a two-factor matrix".into()));
        }
        let spec = self.spec.clone();
        let d = spec.dim();
        let mut out = GMat::zero(spec.clone(), 2);
        for (&(row, col), val) in &self.entries {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            // abstract coefficient of E_{ij} ⊗ E_{kl}
            let decode_odd = (spec.grade(k) ^ spec.grade(l)) & spec.grade(j) == 1;
            let c = apply_sign(decode_odd, val.clone());
            let ((ni, nj, nk, nl), c) = if factor == 0 {
                let gi = spec.grade(i);
                let gj = spec.grade(j);
                let mut neg = (gi & gj) ^ gj == 1;
                if spec.theta(i) * spec.theta(j) == -1 {
                    neg = !neg;
                }
                ((spec.bar(j), spec.bar(i), k, l), apply_sign(neg, c))
            } else {
                let gk = spec.grade(k);
                let gl = spec.grade(l);
                let mut neg = (gk & gl) ^ gl == 1;
                if spec.theta(k) * spec.theta(l) == -1 {
                    neg = !neg;
                }
                ((i, j, spec.bar(l), spec.bar(k)), apply_sign(neg, c))
            };
            // rematerialize with the kron sign
            let encode_odd = (spec.grade(nk) ^ spec.grade(nl)) & spec.grade(nj) == 1;
            out.add_to(ni * d + nk, nj * d + nl, &apply_sign(encode_odd, c));
        }
        Ok(out)
    }

    /// Embed a two-factor operator into factors (p, q) of an f-factor space.
    pub fn embed_pair(&self, p: usize, q: usize, total: usize) -> Result<Self> {
        if self.factors != 2 {
            return Err(Error::Shape("embed_pair expects a two-factor matrix".into()));
        }
        if p == q || p >= total || q >= total {
            return Err(Error::Shape(format!("bad embed positions ({p},{q}) in {total}")));
        }
        let spec = self.spec.clone();
        let d = spec.dim();
        let mut out = GMat::zero(spec.clone(), total);
        let rest = total - 2;
        let rest_count = d.pow(rest as u32);
        // positions other than p and q, in order
        let others: Vec<usize> = (0..total).filter(|&r| r != p && r != q).collect();
        for (&(row, col), val) in &self.entries {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            let decode_odd = (spec.grade(k) ^ spec.grade(l)) & spec.grade(j) == 1;
            let c = apply_sign(decode_odd, val.clone());
            // operator digits: E_{ij} at p, E_{kl} at q, identity elsewhere
            for other in 0..rest_count {
                let mut rowd = vec![0usize; total];
                let mut cold = vec![0usize; total];
                let mut tmp = other;
                for &pos in others.iter().rev() {
                    rowd[pos] = tmp % d;
                    cold[pos] = tmp % d;
                    tmp /= d;
                }
                rowd[p] = i;
                cold[p] = j;
                rowd[q] = k;
                cold[q] = l;
                // sign: each factor operator of grade g moves past the column
                // digits of the factors before it
                let mut neg = false;
                let mut col_grade_prefix = 0u8;
                for r in 0..total {
                    let g = spec.grade(rowd[r]) ^ spec.grade(cold[r]);
                    if g & col_grade_prefix == 1 {
                        neg = !neg;
                    }
                    col_grade_prefix ^= spec.grade(cold[r]);
                }
                let (mut ri, mut ci) = (0usize, 0usize);
                for r in 0..total {
                    ri = ri * d + rowd[r];
                    ci = ci * d + cold[r];
                }
                out.add_to(ri, ci, &apply_sign(neg, c.clone()));
            }
        }
        Ok(out)
    }

    /// Partial trace over the first (slowest) factor.
    pub fn trace_out_first(&self) -> Result<Self> {
        if self.factors == 0 {
            return Err(Error::Shape("nothing to trace".into()));
        }
        let sub = self.dim / self.spec.dim();
        let mut out = GMat::zero(self.spec.clone(), self.factors - 1);
        for (&(r, c), v) in &self.entries {
            if r / sub == c / sub {
                out.add_to(r % sub, c % sub, v);
            }
        }
        Ok(out)
    }

    /// Apply to a basis column vector, returning the (sparse) image column.
    pub fn apply_basis(&self, col: usize) -> Vec<(usize, T)> {
        self.entries
            .iter()
            .filter(|((_, c), _)| *c == col)
            .map(|(&(r, _), v)| (r, v.clone()))
            .collect()
    }

    /// Largest few entries rendered for failure reports.
    pub fn first_nonzero(&self) -> Option<((usize, usize), &T)> {
        self.entries.iter().next().map(|(&rc, v)| (rc, v))
    }
}

impl<T: Ring> Add for &GMat<T> {
    type Output = GMat<T>;
    fn add(self, o: &GMat<T>) -> GMat<T> {
        self.try_add(o).expect("matrix shape mismatch")
    }
}

impl<T: Ring> Sub for &GMat<T> {
    type Output = GMat<T>;
    fn sub(self, o: &GMat<T>) -> GMat<T> {
        self.try_sub(o).expect("matrix shape mismatch")
    }
}

impl<T: Ring> Mul for &GMat<T> {
    type Output = GMat<T>;
    fn mul(self, o: &GMat<T>) -> GMat<T> {
        self.try_mul(o).expect("matrix shape mismatch")
    }
}

impl GMat<Gaussian> {
    pub fn to_complex(&self) -> GMat<Complex64> {
        self.map(|g| g.to_complex())
    }
}

impl GMat<RatFunc> {
    /// Evaluate all entries at a complex point.
    pub fn eval(&self, x: Complex64) -> Result<GMat<Complex64>> {
        let mut out = GMat::zero(self.spec.clone(), self.factors);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.eval(x)?);
        }
        Ok(out)
    }

    /// Common-denominator split: returns (polynomial matrix, scalar denominator)
    /// with self = matrix / denominator entrywise.
    pub fn common_denominator(&self) -> (GMat<Poly>, Poly) {
        let mut den = Poly::one();
        for v in self.entries.values() {
            let g = Poly::gcd(&den, v.den());
            let (extra, r) = v.den().divrem(&g);
            debug_assert!(r.is_zero());
            den = &den * &extra;
        }
        let mut out = GMat::zero(self.spec.clone(), self.factors);
        for (&(r, c), v) in &self.entries {
            let (cof, rem) = den.divrem(v.den());
            debug_assert!(rem.is_zero());
            out.set(r, c, v.num() * &cof);
        }
        (out, den)
    }
}
