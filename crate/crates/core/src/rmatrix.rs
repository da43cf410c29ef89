//! The invariant R matrices and their defining identities.
//!
//! Rational normalization:  R(u) = 1 + P/u − Q/(u+κ)
//! Physical normalization:  R(λ) = λ(λ+iκ)·1 + i(λ+iκ)P − iλQ,   λ = iu
//!
//! The two differ by the scalar λ(λ+iκ); nothing here converts silently
//! between them — every consumer states which form it expects.

use crate::error::Result;
use crate::gaussian::Gaussian;
use crate::gmatrix::GMat;
use crate::grading::GradingSpec;
use crate::poly::{Poly, Poly2};
use crate::ratfunc::RatFunc;
use crate::report::{IdentityReport, Witness};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    RationalU,
    PhysicalLambda,
}

/// The (super)permutation operator P = Σ (−1)^{[j]} E_{ij} ⊗ E_{ji}.
pub fn permutation_op(spec: &Arc<GradingSpec>) -> GMat<Gaussian> {
    let d = spec.dim();
    let mut p = GMat::zero(spec.clone(), 2);
    for i in 0..d {
        for j in 0..d {
            let e1 = GMat::<Gaussian>::elementary(spec.clone(), i, j);
            let e2 = GMat::<Gaussian>::elementary(spec.clone(), j, i);
            let mut term = e1.graded_kron(&e2).unwrap();
            if spec.grade(j) == 1 {
                term = term.neg();
            }
            p = p.try_add(&term).unwrap();
        }
    }
    p
}

/// Q = Σ (−1)^{[i][j]} θ_i θ_j E_{j̄ī} ⊗ E_{ji} = P^{t₁}.
pub fn q_op(spec: &Arc<GradingSpec>) -> GMat<Gaussian> {
    let d = spec.dim();
    let mut q = GMat::zero(spec.clone(), 2);
    for i in 0..d {
        for j in 0..d {
            let e1 = GMat::<Gaussian>::elementary(spec.clone(), spec.bar(j), spec.bar(i));
            let e2 = GMat::<Gaussian>::elementary(spec.clone(), j, i);
            let mut term = e1.graded_kron(&e2).unwrap();
            let mut neg = spec.grade(i) & spec.grade(j) == 1;
            if spec.theta(i) * spec.theta(j) == -1 {
                neg = !neg;
            }
            if neg {
                term = term.neg();
            }
            q = q.try_add(&term).unwrap();
        }
    }
    q
}

pub fn build_p_q(spec: &Arc<GradingSpec>) -> (GMat<Gaussian>, GMat<Gaussian>) {
    (permutation_op(spec), q_op(spec))
}

#[derive(Clone)]
pub struct RMatrixHandle {
    pub spec: Arc<GradingSpec>,
    pub normalization: Normalization,
    pub matrix: GMat<RatFunc>,
}

/// Symbolic R matrix in the requested normalization, entries rational in the
/// spectral variable.
pub fn r_matrix(spec: &Arc<GradingSpec>, normalization: Normalization) -> RMatrixHandle {
    let p = permutation_op(spec);
    let q = q_op(spec);
    let id = GMat::<Gaussian>::identity(spec.clone(), 2);
    let kappa = spec.kappa_gaussian();
    let matrix = match normalization {
        Normalization::RationalU => {
            // 1 + P/u − Q/(u+κ)
            let inv_u = RatFunc::new(Poly::one(), Poly::var()).unwrap();
            let inv_uk = RatFunc::new(
                Poly::one(),
                Poly::affine(Gaussian::one(), kappa),
            )
            .unwrap();
            let a = id.map(|g| RatFunc::constant(g.clone()));
            let b = p.map(|g| RatFunc::constant(g.clone())).scale(&inv_u);
            let c = q.map(|g| RatFunc::constant(g.clone())).scale(&inv_uk);
            a.try_add(&b).unwrap().try_sub(&c).unwrap()
        }
        Normalization::PhysicalLambda => {
            let poly = r_physical_poly(spec, &Poly2::var_u());
            poly.map(|entry| {
                debug_assert!(entry.deg_v().unwrap_or(0) == 0 || entry.is_zero());
                RatFunc::from_poly(entry.coeff_v(0))
            })
        }
    };
    RMatrixHandle { spec: spec.clone(), normalization, matrix }
}

/// Numerator of the rational-u R matrix at argument x:
/// x(x+κ)·1 + (x+κ)P − xQ, the common denominator being x(x+κ).
pub fn r_numerator(spec: &Arc<GradingSpec>, x: &Poly2) -> GMat<Poly2> {
    let p = permutation_op(spec).map(|g| Poly2::constant(g.clone()));
    let q = q_op(spec).map(|g| Poly2::constant(g.clone()));
    let id = GMat::<Gaussian>::identity(spec.clone(), 2).map(|g| Poly2::constant(g.clone()));
    let xk = &(x.clone()) + &Poly2::constant(spec.kappa_gaussian());
    let xxk = x * &xk;
    id.scale(&xxk)
        .try_add(&p.scale(&xk))
        .unwrap()
        .try_sub(&q.scale(x))
        .unwrap()
}

/// Physical R matrix at a polynomial argument x:
/// x(x+iκ)·1 + i(x+iκ)P − ixQ.
pub fn r_physical_poly(spec: &Arc<GradingSpec>, x: &Poly2) -> GMat<Poly2> {
    let p = permutation_op(spec).map(|g| Poly2::constant(g.clone()));
    let q = q_op(spec).map(|g| Poly2::constant(g.clone()));
    let id = GMat::<Gaussian>::identity(spec.clone(), 2).map(|g| Poly2::constant(g.clone()));
    let i = Gaussian::i();
    let xik = &(x.clone()) + &Poly2::constant(spec.i_kappa());
    id.scale(&(x * &xik))
        .try_add(&p.scale(&xik.scale(&i)))
        .unwrap()
        .try_sub(&q.scale(&x.scale(&i)))
        .unwrap()
}

/// One-variable physical R matrix as a polynomial matrix in λ.
pub fn r_physical_poly1(spec: &Arc<GradingSpec>) -> GMat<Poly> {
    r_physical_poly(spec, &Poly2::var_u()).map(|e| e.coeff_v(0))
}

fn first_witness(m: &GMat<Poly2>) -> Option<Witness> {
    m.first_nonzero().map(|((r, c), v)| Witness {
        row: r + 1,
        col: c + 1,
        value: v.pretty('u', 'v'),
    })
}

fn max_deg(m: &GMat<Poly2>) -> (usize, usize) {
    let mut du = 0;
    let mut dv = 0;
    for (_, v) in m.iter() {
        du = du.max(v.deg_u().unwrap_or(0));
        dv = dv.max(v.deg_v().unwrap_or(0));
    }
    (du, dv)
}

/// Verify the (super) Yang–Baxter equation exactly on the tensor cube.
///
/// Both sides carry the common scalar denominator u(u+κ)(u+v)(u+v+κ)v(v+κ),
/// so the check reduces to an identity between polynomial matrices.
pub fn verify_ybe(spec: &Arc<GradingSpec>) -> Result<IdentityReport> {
    verify_ybe_inner(spec, false)
}

/// Negative control: flip the sign of Q and report the (expected) failure.
pub fn verify_ybe_mutated(spec: &Arc<GradingSpec>) -> Result<IdentityReport> {
    verify_ybe_inner(spec, true)
}

fn verify_ybe_inner(spec: &Arc<GradingSpec>, mutate: bool) -> Result<IdentityReport> {
    let t0 = Instant::now();
    let u = Poly2::var_u();
    let v = Poly2::var_v();
    let upv = &u + &v;
    let build = |x: &Poly2| -> GMat<Poly2> {
        let m = r_numerator(spec, x);
        if mutate {
            // wrong relative sign between P and Q
            let q = q_op(spec).map(|g| Poly2::constant(g.clone()));
            m.try_add(&q.scale(&x.scale(&Gaussian::from_int(2)))).unwrap()
        } else {
            m
        }
    };
    let r12 = build(&u).embed_pair(0, 1, 3)?;
    let r13 = build(&upv).embed_pair(0, 2, 3)?;
    let r23 = build(&v).embed_pair(1, 2, 3)?;
    let lhs = r12.try_mul(&r13)?.try_mul(&r23)?;
    let rhs = r23.try_mul(&r13)?.try_mul(&r12)?;
    let resid = lhs.try_sub(&rhs)?;
    let elapsed = t0.elapsed().as_millis();
    let algebra = spec.descriptor();
    if resid.is_zero() {
        let mut rep = IdentityReport::pass("yang-baxter", &algebra, elapsed);
        rep.max_degree = Some(max_deg(&lhs));
        Ok(rep)
    } else {
        let mut rep =
            IdentityReport::fail("yang-baxter", &algebra, first_witness(&resid).unwrap(), elapsed);
        rep.max_degree = Some(max_deg(&resid));
        Ok(rep)
    }
}

/// Verify crossing and unitarity of the physical R matrix:
/// R(λ)R(−λ) = (λ²+κ²)(λ²+1)·1 and R(λ) = R^{t₁}(−λ−iκ), both exactly.
pub fn verify_crossing_unitarity(spec: &Arc<GradingSpec>) -> Result<IdentityReport> {
    let t0 = Instant::now();
    let algebra = spec.descriptor();
    let lam = Poly2::var_u();
    let neg = |x: &Poly2| -> Poly2 { -x };

    // unitarity
    let r_pos = r_physical_poly(spec, &lam);
    let r_neg = r_physical_poly(spec, &neg(&lam));
    let prod = r_pos.try_mul(&r_neg)?;
    let kappa = spec.kappa_gaussian();
    let lam2 = &lam * &lam;
    let scalar = &(&lam2 + &Poly2::constant(&kappa * &kappa))
        * &(&lam2 + &Poly2::one());
    let id = GMat::<Gaussian>::identity(spec.clone(), 2).map(|g| Poly2::constant(g.clone()));
    let resid = prod.try_sub(&id.scale(&scalar))?;
    if let Some(w) = first_witness(&resid) {
        return Ok(IdentityReport::fail("unitarity", &algebra, w, t0.elapsed().as_millis()));
    }

    // crossing: R(λ) − R^{t₁}(−λ−iκ) = 0
    let shifted = {
        let arg = &neg(&lam) - &Poly2::constant(spec.i_kappa());
        r_physical_poly(spec, &arg)
    };
    let resid = r_pos.try_sub(&shifted.super_transpose_factor(0)?)?;
    if let Some(w) = first_witness(&resid) {
        return Ok(IdentityReport::fail("crossing", &algebra, w, t0.elapsed().as_millis()));
    }

    Ok(IdentityReport::pass("crossing-unitarity", &algebra, t0.elapsed().as_millis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::catalog_specs;
    use num_complex::Complex64;

    fn arc(s: GradingSpec) -> Arc<GradingSpec> {
        Arc::new(s)
    }

    #[test]
    fn p_q_operator_algebra() {
        for spec in catalog_specs() {
            let spec = arc(spec);
            let (p, q) = build_p_q(&spec);
            let id = GMat::<Gaussian>::identity(spec.clone(), 2);
            let theta0 = Gaussian::from_int(spec.theta0() as i64);
            // P² = 1
            assert!(p.try_mul(&p).unwrap().try_sub(&id).unwrap().is_zero(), "P^2 != 1 for {spec}");
            // PQ = QP = θ0 Q
            let t0q = q.scale(&theta0);
            assert!(p.try_mul(&q).unwrap().try_sub(&t0q).unwrap().is_zero(), "PQ != t0 Q for {spec}");
            assert!(q.try_mul(&p).unwrap().try_sub(&t0q).unwrap().is_zero(), "QP != t0 Q for {spec}");
            // Q² = θ0 (m−n) Q
            let c = Gaussian::from_int(spec.theta0() as i64 * (spec.m() as i64 - spec.n() as i64));
            assert!(
                q.try_mul(&q).unwrap().try_sub(&q.scale(&c)).unwrap().is_zero(),
                "Q^2 != t0(m-n)Q for {spec}"
            );
            // Q = P^{t1}
            assert!(
                q.try_sub(&p.super_transpose_factor(0).unwrap()).unwrap().is_zero(),
                "Q != P^t1 for {spec}"
            );
            // R^{t1 t2} = R (checked on P and Q separately, which span R)
            let ptt = p.super_transpose_factor(0).unwrap().super_transpose_factor(1).unwrap();
            assert!(ptt.try_sub(&p).unwrap().is_zero(), "P^t1t2 != P for {spec}");
            let qtt = q.super_transpose_factor(0).unwrap().super_transpose_factor(1).unwrap();
            assert!(qtt.try_sub(&q).unwrap().is_zero(), "Q^t1t2 != Q for {spec}");
        }
    }

    #[test]
    fn q_squared_so3() {
        let spec = arc(GradingSpec::so(3).unwrap());
        let q = q_op(&spec);
        let q2 = q.try_mul(&q).unwrap();
        assert!(q2.try_sub(&q.scale(&Gaussian::from_int(3))).unwrap().is_zero());
    }

    #[test]
    fn ybe_small_algebras() {
        for name in ["so:3", "sp:2", "osp:1:2"] {
            let spec = arc(GradingSpec::parse(name).unwrap());
            let rep = verify_ybe(&spec).unwrap();
            assert!(rep.passed(), "YBE failed for {name}: {:?}", rep.witness);
        }
    }

    #[test]
    fn ybe_negative_control() {
        let spec = arc(GradingSpec::so(3).unwrap());
        let rep = verify_ybe_mutated(&spec).unwrap();
        assert!(!rep.passed());
        assert!(rep.witness.is_some());
    }

    #[test]
    fn crossing_unitarity_small() {
        for name in ["so:3", "so:4", "sp:2", "osp:1:2"] {
            let spec = arc(GradingSpec::parse(name).unwrap());
            let rep = verify_crossing_unitarity(&spec).unwrap();
            assert!(rep.passed(), "crossing-unitarity failed for {name}: {:?}", rep.witness);
        }
    }

    #[test]
    fn physical_r_at_zero_is_minus_kappa_p() {
        // so(3): R(0) = −κP = −(1/2)P
        let spec = arc(GradingSpec::so(3).unwrap());
        let r = r_matrix(&spec, Normalization::PhysicalLambda);
        let p = permutation_op(&spec).to_complex();
        let at0 = r.matrix.eval(Complex64::new(0.0, 0.0)).unwrap();
        for ((r, c), v) in at0.iter() {
            let expect = p.get(*r, *c) * Complex64::new(-0.5, 0.0);
            assert!((v - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn rational_r_large_u_limit_is_identity() {
        let spec = arc(GradingSpec::sp(2).unwrap());
        let r = r_matrix(&spec, Normalization::RationalU);
        let big = Complex64::new(1e9, 0.0);
        let m = r.matrix.eval(big).unwrap();
        for i in 0..m.dim {
            for j in 0..m.dim {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((m.get(i, j) - Complex64::new(expect, 0.0)).norm() < 1e-6);
            }
        }
    }
}

