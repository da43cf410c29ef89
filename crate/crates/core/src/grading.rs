//! Algebra descriptor for the so(m) / sp(n) / osp(m|n) vector representations.
//!
//! Holds the Z₂ grading of the m+n basis indices, the signs θ_i, the conjugate
//! index map ī, and κ = (m−n−2)θ₀/2. Indices are 0-based internally; the
//! 1-based convention of the JSON/CLI surface is translated at the boundary.

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradingSpec {
    m: usize,
    n: usize,
    theta0: i8,
    kappa: BigRational,
    grades: Vec<u8>,
    thetas: Vec<i8>,
    bars: Vec<usize>,
}

impl GradingSpec {
    pub fn new(m: usize, n: usize, theta0: i8) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::BadAlgebra(format!("n must be even, got {n}")));
        }
        if m + n == 0 {
            return Err(Error::BadAlgebra("m = n = 0 has no vector representation".into()));
        }
        if theta0 != 1 && theta0 != -1 {
            return Err(Error::BadAlgebra(format!("theta0 must be ±1, got {theta0}")));
        }
        let dim = m + n;
        let kappa = BigRational::new(
            BigInt::from(m as i64 - n as i64 - 2) * BigInt::from(theta0),
            BigInt::from(2),
        );
        // (−1)^{[i]} = θ0 on the first m indices, −θ0 on the rest
        let grades = (0..dim)
            .map(|i| {
                let sign = if i < m { theta0 } else { -theta0 };
                if sign == 1 {
                    0u8
                } else {
                    1u8
                }
            })
            .collect();
        let thetas = (0..dim).map(|i| if i < m + n / 2 { 1i8 } else { -1 }).collect();
        let bars = (0..dim)
            .map(|i| if i < m { m - 1 - i } else { 2 * m + n - 1 - i })
            .collect();
        Ok(GradingSpec { m, n, theta0, kappa, grades, thetas, bars })
    }

    pub fn so(m: usize) -> Result<Self> {
        GradingSpec::new(m, 0, 1)
    }

    pub fn sp(n: usize) -> Result<Self> {
        GradingSpec::new(0, n, -1)
    }

    pub fn osp(m: usize, n: usize) -> Result<Self> {
        GradingSpec::new(m, n, 1)
    }

    /// Parse `so:m`, `sp:n`, `osp:m:n` or `osp:m:n:±1`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let parts: Vec<&str> = descriptor.split(':').collect();
        let bad = || Error::BadAlgebra(descriptor.to_string());
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["so", m] => GradingSpec::so(num(m)?),
            ["sp", n] => GradingSpec::sp(num(n)?),
            ["osp", m, n] => GradingSpec::osp(num(m)?, num(n)?),
            ["osp", m, n, t] => {
                let theta0 = match *t {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    _ => return Err(bad()),
                };
                GradingSpec::new(num(m)?, num(n)?, theta0)
            }
            _ => Err(bad()),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn theta0(&self) -> i8 {
        self.theta0
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn kappa_gaussian(&self) -> Gaussian {
        Gaussian::from_rational(self.kappa.clone())
    }

    /// i·κ as an exact scalar.
    pub fn i_kappa(&self) -> Gaussian {
        Gaussian::rational_times_i(self.kappa.clone())
    }

    pub fn kappa_f64(&self) -> f64 {
        (self.m as f64 - self.n as f64 - 2.0) * self.theta0 as f64 / 2.0
    }

    /// Z₂ grade of index i (0-based).
    pub fn grade(&self, i: usize) -> u8 {
        self.grades[i]
    }

    /// (−1)^{[i]} as ±1.
    pub fn grade_sign(&self, i: usize) -> i8 {
        if self.grades[i] == 0 {
            1
        } else {
            -1
        }
    }

    pub fn theta(&self, i: usize) -> i8 {
        self.thetas[i]
    }

    /// Conjugate index ī (0-based).
    pub fn bar(&self, i: usize) -> usize {
        self.bars[i]
    }

    pub fn is_pure_so(&self) -> bool {
        self.n == 0
    }

    pub fn is_pure_sp(&self) -> bool {
        self.m == 0
    }

    pub fn is_orthogonal_index(&self, i: usize) -> bool {
        i < self.m
    }

    /// Grade of a composite index in a `factors`-fold tensor space.
    pub fn composite_grade(&self, mut idx: usize, factors: usize) -> u8 {
        let d = self.dim();
        let mut g = 0u8;
        for _ in 0..factors {
            g ^= self.grades[idx % d];
            idx /= d;
        }
        g
    }

    /// Digits of a composite index, slowest factor first.
    pub fn digits(&self, mut idx: usize, factors: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; factors];
        for k in (0..factors).rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    }

    pub fn descriptor(&self) -> String {
        if self.is_pure_so() && self.theta0 == 1 {
            format!("so:{}", self.m)
        } else if self.is_pure_sp() && self.theta0 == -1 {
            format!("sp:{}", self.n)
        } else if self.theta0 == 1 {
            format!("osp:{}:{}", self.m, self.n)
        } else {
            format!("osp:{}:{}:-1", self.m, self.n)
        }
    }
}

impl fmt::Display for GradingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl Serialize for GradingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for GradingSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GradingSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The algebras exercised by the exact-identity suite.
pub fn catalog_specs() -> Vec<GradingSpec> {
    let mut out = Vec::new();
    for m in 2..=8 {
        out.push(GradingSpec::so(m).unwrap());
    }
    for n in [2, 4, 6] {
        out.push(GradingSpec::sp(n).unwrap());
    }
    for (m, n) in [(1, 2), (2, 2), (2, 4), (4, 2)] {
        out.push(GradingSpec::osp(m, n).unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_values() {
        assert_eq!(GradingSpec::so(3).unwrap().kappa_f64(), 0.5);
        assert_eq!(GradingSpec::sp(2).unwrap().kappa_f64(), 2.0);
        assert_eq!(GradingSpec::so(4).unwrap().kappa_f64(), 1.0);
        assert_eq!(GradingSpec::osp(4, 2).unwrap().kappa_f64(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GradingSpec::new(2, 3, 1).is_err());
        assert!(GradingSpec::new(0, 0, 1).is_err());
        assert!(GradingSpec::new(2, 2, 0).is_err());
    }

    #[test]
    fn bar_is_involution_and_theta_relation() {
        for spec in catalog_specs() {
            for i in 0..spec.dim() {
                assert_eq!(spec.bar(spec.bar(i)), i);
                assert_eq!(spec.grade(spec.bar(i)), spec.grade(i));
                let lhs = spec.theta(i) * spec.theta(spec.bar(i));
                let rhs = spec.theta0() * spec.grade_sign(i);
                assert_eq!(lhs, rhs, "theta relation failed for {spec} index {i}");
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["so:5", "sp:4", "osp:2:4", "osp:2:4:-1"] {
            let spec = GradingSpec::parse(s).unwrap();
            assert_eq!(spec.descriptor(), *s);
        }
        assert!(GradingSpec::parse("su:3").is_err());
    }
}
