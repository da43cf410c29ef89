//! Double-row (boundary) transfer matrices for N-site open chains:
//! t(λ) = Tr₀ K₀⁺(λ) T₀(λ) K₀⁻(λ) T̂₀(λ), with T₀ = R_{0N}···R_{01} and
//! T̂₀ = R_{10}···R_{N0}, all in the physical normalization. K⁺ = 1
//! throughout, matching the eigenvalue formulas in the bethe module.

use crate::bethe::{boundary_k_matrix, OpenBoundary, Series};
use crate::error::{Error, Result};

use crate::gmatrix::GMat;
use crate::poly::Poly2;
use crate::ratfunc::RatFunc;
use crate::rmatrix::{build_p_q, r_physical_poly};
use ndarray::Array2;
use ndarray_linalg::Eig;
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

#[derive(Clone, Debug)]
pub struct ChainContext {
    pub series: Series,
    pub boundary: OpenBoundary,
    pub sites: usize,
    pub mem_budget_mb: usize,
}

impl ChainContext {
    pub fn new(series: Series, boundary: OpenBoundary, sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::Shape("need at least one site".into()));
        }
        boundary.admissible(series)?;
        Ok(ChainContext { series, boundary, sites, mem_budget_mb: 1024 })
    }

    pub fn quantum_dim(&self) -> usize {
        self.series.dim().pow(self.sites as u32)
    }

    fn full_dim(&self) -> usize {
        self.series.dim().pow(self.sites as u32 + 1)
    }

    fn check_budget(&self) -> Result<()> {
        let dim = self.full_dim();
        // a handful of dense complex matrices of the full dimension
        let need_mb = dim * dim * 16 * 6 / (1024 * 1024);
        if need_mb > self.mem_budget_mb {
            return Err(Error::Budget { need_mb, budget_mb: self.mem_budget_mb });
        }
        Ok(())
    }
}

/// Dense two-site operator placed at factor positions (p, q) of a
/// `total`-factor space. Chains here are purely even-graded, so no Koszul
/// signs arise.
fn embed_pair_dense(x: &Array2<C>, p: usize, q: usize, total: usize, d: usize) -> Array2<C> {
    let dim = d.pow(total as u32);
    let stride = |pos: usize| d.pow((total - 1 - pos) as u32);
    let rest: Vec<usize> = (0..total).filter(|&r| r != p && r != q).collect();
    let rest_count = d.pow(rest.len() as u32);
    let mut out = Array2::zeros((dim, dim));
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let v = x[[i * d + k, j * d + l]];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    let rbase = i * stride(p) + k * stride(q);
                    let cbase = j * stride(p) + l * stride(q);
                    for mask in 0..rest_count {
                        let mut row = rbase;
                        let mut col = cbase;
                        let mut t = mask;
                        for &pos in rest.iter().rev() {
                            let dg = t % d;
                            t /= d;
                            row += dg * stride(pos);
                            col += dg * stride(pos);
                        }
                        out[[row, col]] += v;
                    }
                }
            }
        }
    }
    out
}

/// Physical R(λ) as a dense complex matrix.
pub fn r_dense(series: Series, lambda: C) -> Array2<C> {
    let spec = series.spec();
    let (p, q) = build_p_q(&spec);
    let d2 = spec.dim() * spec.dim();
    let kappa = spec.kappa_f64();
    let ik = C::new(0.0, kappa);
    let s_id = lambda * (lambda + ik);
    let s_p = C::new(0.0, 1.0) * (lambda + ik);
    let s_q = C::new(0.0, 1.0) * lambda;
    let mut out = Array2::zeros((d2, d2));
    for i in 0..d2 {
        out[[i, i]] = s_id;
    }
    for (&(r, c), v) in p.iter() {
        out[[r, c]] += s_p * v.to_complex();
    }
    for (&(r, c), v) in q.iter() {
        out[[r, c]] -= s_q * v.to_complex();
    }
    out
}

/// Numeric double-row transfer matrix on the quantum space at complex λ.
pub fn transfer_matrix(ctx: &ChainContext, lambda: C) -> Result<Array2<C>> {
    ctx.check_budget()?;
    let d = ctx.series.dim();
    let nfac = ctx.sites + 1;
    let r = r_dense(ctx.series, lambda);
    // T0 = R_{0N} ... R_{01}
    let mut t_mono: Option<Array2<C>> = None;
    for j in (1..=ctx.sites).rev() {
        let rj = embed_pair_dense(&r, 0, j, nfac, d);
        t_mono = Some(match t_mono {
            None => rj,
            Some(acc) => acc.dot(&rj),
        });
    }
    // T̂0 = R_{10} R_{20} ... R_{N0}
    let mut that: Option<Array2<C>> = None;
    for j in 1..=ctx.sites {
        let rj = embed_pair_dense(&r, j, 0, nfac, d);
        that = Some(match that {
            None => rj,
            Some(acc) => acc.dot(&rj),
        });
    }
    let t_mono = t_mono.unwrap();
    let that = that.unwrap();
    // K⁻ embedded on the auxiliary factor (slow index); K⁺ = 1
    let kdiag = boundary_k_matrix(ctx.series, &ctx.boundary)?;
    let dq = d.pow(ctx.sites as u32);
    let full = d * dq;
    let mut km = Array2::zeros((full, full));
    for a in 0..d {
        let kv = kdiag.get(a, a).eval(lambda)?;
        for r in 0..dq {
            km[[a * dq + r, a * dq + r]] = kv;
        }
    }
    let f = t_mono.dot(&km).dot(&that);
    let mut out = Array2::zeros((dq, dq));
    for a in 0..d {
        for r in 0..dq {
            for c in 0..dq {
                out[[r, c]] += f[[a * dq + r, a * dq + c]];
            }
        }
    }
    Ok(out)
}

/// Symbolic transfer matrix with rational-function entries; restricted to the
/// desk-scale regime where exact arithmetic stays cheap.
pub fn transfer_matrix_symbolic(ctx: &ChainContext) -> Result<GMat<RatFunc>> {
    if ctx.sites > 2 || ctx.quantum_dim() > 25 {
        return Err(Error::Unsupported(
            "symbolic transfer matrix is limited to N <= 2 and quantum dimension <= 25".into(),
        ));
    }
    let spec = ctx.series.spec();
    let nfac = ctx.sites + 1;
    let r_poly = r_physical_poly(&spec, &Poly2::var_u())
        .map(|p| RatFunc::from_poly(p.coeff_v(0)));
    let mut t_mono: Option<GMat<RatFunc>> = None;
    for j in (1..=ctx.sites).rev() {
        let rj = r_poly.embed_pair(0, j, nfac)?;
        t_mono = Some(match t_mono {
            None => rj,
            Some(acc) => acc.try_mul(&rj)?,
        });
    }
    let mut that: Option<GMat<RatFunc>> = None;
    for j in 1..=ctx.sites {
        let rj = r_poly.embed_pair(j, 0, nfac)?;
        that = Some(match that {
            None => rj,
            Some(acc) => acc.try_mul(&rj)?,
        });
    }
    let kminus = boundary_k_matrix(ctx.series, &ctx.boundary)?;
    let mut krest = GMat::<RatFunc>::identity(spec.clone(), 1);
    for _ in 1..ctx.sites {
        krest = krest.graded_kron(&GMat::identity(spec.clone(), 1))?;
    }
    let k0 = kminus.graded_kron(&krest)?;
    let f = t_mono.unwrap().try_mul(&k0)?.try_mul(&that.unwrap())?;
    f.trace_out_first()
}

/// t(λ)|ω₊⟩ compared entry-by-entry with Λ⁰(λ)|ω₊⟩, exactly.
/// Returns the symbolic difference of the ω₊ component and a flag telling
/// whether the remaining components of t|ω₊⟩ vanish (they must).
pub fn pseudo_vacuum_check(ctx: &ChainContext) -> Result<(bool, RatFunc)> {
    let t = transfer_matrix_symbolic(ctx)?;
    let col = t.apply_basis(0);
    let lam0 = crate::bethe::vacuum_eigenvalue(ctx.series, &ctx.boundary, ctx.sites)?;
    let mut diag_term = RatFunc::zero();
    let mut off_diagonal_zero = true;
    for (row, v) in col {
        if row == 0 {
            diag_term = v;
        } else if !v.is_zero() {
            off_diagonal_zero = false;
        }
    }
    Ok((off_diagonal_zero, &diag_term - &lam0))
}

/// Pseudo-vacuum eigenvalue Λ⁰ as a rational function of λ.
pub fn pseudo_vacuum_eigenvalue(ctx: &ChainContext) -> Result<RatFunc> {
    crate::bethe::vacuum_eigenvalue(ctx.series, &ctx.boundary, ctx.sites)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRecord {
    pub lambda: (f64, f64),
    pub eigenvalues: Vec<(f64, f64)>,
    /// ‖t v − Λ v‖ / ‖v‖ per eigenpair.
    pub residuals: Vec<f64>,
    /// Cartan charges ⟨v|S^{(l)}|v⟩ per eigenvector.
    pub sectors: Vec<Vec<f64>>,
}

/// Diagonal Cartan generators S^{(l)} = Σ_sites (E_ll − E_{l̄l̄}) on the
/// quantum space, l = 1..k.
pub fn cartan_charges(series: Series, sites: usize) -> Vec<Vec<f64>> {
    let spec = series.spec();
    let d = spec.dim();
    let k = series.rank();
    let dim = d.pow(sites as u32);
    let mut out = vec![vec![0.0; dim]; k];
    for (l, row) in out.iter_mut().enumerate() {
        let lbar = spec.bar(l);
        for (idx, val) in row.iter_mut().enumerate() {
            let mut t = idx;
            for _ in 0..sites {
                let dg = t % d;
                t /= d;
                if dg == l {
                    *val += 1.0;
                } else if dg == lbar {
                    *val -= 1.0;
                }
            }
        }
    }
    out
}

/// Dense diagonalization of t(λ) with residual checks and sector labels.
pub fn spectrum(ctx: &ChainContext, lambda: C) -> Result<SpectrumRecord> {
    let dim = ctx.quantum_dim();
    if dim > 4096 {
        return Err(Error::Budget { need_mb: dim * dim * 16 / (1024 * 1024), budget_mb: ctx.mem_budget_mb });
    }
    let t = transfer_matrix(ctx, lambda)?;
    let (vals, vecs) = t.eig().map_err(|e| Error::NoConvergence(format!("eig: {e}")))?;
    let charges = cartan_charges(ctx.series, ctx.sites);
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut residuals = Vec::with_capacity(dim);
    let mut sectors = Vec::with_capacity(dim);
    for (idx, lamv) in vals.iter().enumerate() {
        let v = vecs.column(idx);
        let tv = t.dot(&v);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for r in 0..dim {
            num += (tv[r] - lamv * v[r]).norm_sqr();
            den += v[r].norm_sqr();
        }
        eigenvalues.push((lamv.re, lamv.im));
        residuals.push((num / den).sqrt());
        let mut sec = Vec::with_capacity(charges.len());
        for ch in &charges {
            let mut acc = 0.0;
            for r in 0..dim {
                acc += ch[r] * v[r].norm_sqr();
            }
            sec.push(acc / den);
        }
        sectors.push(sec);
    }
    Ok(SpectrumRecord { lambda: (lambda.re, lambda.im), eigenvalues, residuals, sectors })
}

/// H = d/dλ t(λ)|_{λ=0}: exact derivative of the symbolic transfer matrix at
/// small N, Richardson-extrapolated central differences otherwise.
pub fn hamiltonian(ctx: &ChainContext) -> Result<Array2<C>> {
    let dim = ctx.quantum_dim();
    if ctx.sites <= 2 && dim <= 25 {
        let t = transfer_matrix_symbolic(ctx)?;
        let mut out = Array2::zeros((dim, dim));
        for (&(r, c), f) in t.iter() {
            out[[r, c]] = f.derivative().eval(C::new(0.0, 0.0))?;
        }
        return Ok(out);
    }
    let diff = |h: f64| -> Result<Array2<C>> {
        let tp = transfer_matrix(ctx, C::new(h, 0.0))?;
        let tm = transfer_matrix(ctx, C::new(-h, 0.0))?;
        Ok((tp - tm) / C::new(2.0 * h, 0.0))
    };
    let h = 1e-3;
    let d1 = diff(h)?;
    let d2 = diff(h / 2.0)?;
    let rich = (&d2 * C::new(4.0, 0.0) - &d1) / C::new(3.0, 0.0);
    let agree = (&d2 - &rich).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if agree > 1e-7 * (1.0 + rich.iter().map(|z| z.norm()).fold(0.0, f64::max)) {
        return Err(Error::NoConvergence(format!(
            "finite-difference Hamiltonian did not stabilize (delta {agree:.3e})"
        )));
    }
    Ok(rich)
}

/// The interaction generator: i·t'(0) divided by the t(0) scalar, with the
/// remaining multiple of the identity removed. The factor i is the chain
/// rule of λ = iu — the derivative along the rational variable u is the
/// hermitian direction. For K± = 1 the result is hermitian on the
/// orthogonal series.
pub fn normalized_hamiltonian(ctx: &ChainContext) -> Result<Array2<C>> {
    let h = hamiltonian(ctx)?;
    let t0 = transfer_matrix(ctx, C::new(0.0, 0.0))?;
    let dim = ctx.quantum_dim();
    let s = t0[[0, 0]];
    if s.norm() < 1e-12 {
        return Err(Error::NoConvergence("t(0) vanishes; cannot normalize".into()));
    }
    let mut out = h * C::new(0.0, 1.0) / s;
    let tr: C = (0..dim).map(|i| out[[i, i]]).sum::<C>() / C::new(dim as f64, 0.0);
    for i in 0..dim {
        out[[i, i]] -= tr;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::Gaussian;
    use num_complex::Complex64;

    fn ctx(series: Series, boundary: OpenBoundary, sites: usize) -> ChainContext {
        ChainContext::new(series, boundary, sites).unwrap()
    }

    #[test]
    fn so3_transfer_at_zero() {
        // t(0) = κ²·3·1 = (3/4)·1
        let c = ctx(Series::SoOdd { k: 1 }, OpenBoundary::Identity, 1);
        let t = transfer_matrix(&c, Complex64::new(0.0, 0.0)).unwrap();
        for r in 0..3 {
            for cc in 0..3 {
                let expect = if r == cc { 0.75 } else { 0.0 };
                assert!((t[[r, cc]] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn so4_transfer_at_zero() {
        let c = ctx(Series::SoEven { k: 2 }, OpenBoundary::Identity, 1);
        let t = transfer_matrix(&c, Complex64::new(0.0, 0.0)).unwrap();
        for r in 0..4 {
            assert!((t[[r, r]] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn symbolic_matches_numeric() {
        let c = ctx(Series::Sp { k: 1 }, OpenBoundary::Identity, 2);
        let tsym = transfer_matrix_symbolic(&c).unwrap();
        let lam = Complex64::new(0.37, 0.21);
        let tnum = transfer_matrix(&c, lam).unwrap();
        for (&(r, cc), f) in tsym.iter() {
            let v = f.eval(lam).unwrap();
            assert!((v - tnum[[r, cc]]).norm() < 1e-9 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn pseudo_vacuum_so3_exact() {
        for sites in [1, 2] {
            let c = ctx(Series::SoOdd { k: 1 }, OpenBoundary::Identity, sites);
            let (offdiag_ok, diff) = pseudo_vacuum_check(&c).unwrap();
            assert!(offdiag_ok, "t|w+> has off-vacuum components at N={sites}");
            assert!(diff.is_zero(), "Λ⁰ mismatch at N={sites}: {diff:?}");
        }
    }

    #[test]
    fn commuting_family_sample() {
        let c = ctx(Series::Sp { k: 1 }, OpenBoundary::Identity, 2);
        let l1 = Complex64::new(0.3, 0.12);
        let l2 = Complex64::new(0.55, -0.21);
        let t1 = transfer_matrix(&c, l1).unwrap();
        let t2 = transfer_matrix(&c, l2).unwrap();
        let comm = t1.dot(&t2) - t2.dot(&t1);
        let cnorm = comm.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(cnorm < 1e-10, "commutator too large: {cnorm:e}");
    }

    #[test]
    fn crossing_symmetry_symbolic() {
        // t(λ) = t(−λ−iκ) for K± = 1
        let c = ctx(Series::SoOdd { k: 1 }, OpenBoundary::Identity, 1);
        let t = transfer_matrix_symbolic(&c).unwrap();
        let ik = Gaussian::rational_times_i(c.series.kappa());
        for (&(r, cc), f) in t.iter() {
            let reflected = f.subst_affine(&Gaussian::from_int(-1), &(-&ik));
            assert_eq!(*f, reflected, "crossing failed at ({r},{cc})");
        }
    }

    #[test]
    fn spectrum_contains_vacuum_eigenvalue() {
        let c = ctx(Series::Sp { k: 1 }, OpenBoundary::Identity, 1);
        let lam = Complex64::new(0.42, 0.0);
        let rec = spectrum(&c, lam).unwrap();
        assert_eq!(rec.eigenvalues.len(), 2);
        assert!(rec.residuals.iter().all(|&r| r < 1e-9));
        let lam0 = pseudo_vacuum_eigenvalue(&c).unwrap().eval(lam).unwrap();
        let hit = rec
            .eigenvalues
            .iter()
            .any(|&(re, im)| (Complex64::new(re, im) - lam0).norm() < 1e-10);
        assert!(hit, "Λ⁰ not among the eigenvalues");
    }

    #[test]
    fn hamiltonian_is_hermitian_and_commutes() {
        let c = ctx(Series::SoOdd { k: 1 }, OpenBoundary::Identity, 2);
        let h = normalized_hamiltonian(&c).unwrap();
        let max_h = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for r in 0..h.nrows() {
            for cc in 0..h.ncols() {
                let d = (h[[r, cc]] - h[[cc, r]].conj()).norm();
                assert!(d < 1e-8 * (1.0 + max_h), "not hermitian at ({r},{cc})");
            }
        }
        let t = transfer_matrix(&c, Complex64::new(0.61, 0.0)).unwrap();
        let comm = h.dot(&t) - t.dot(&h);
        let cnorm = comm.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(cnorm < 1e-8 * (1.0 + max_h) * (1.0 + t.iter().map(|z| z.norm()).fold(0.0, f64::max)), "[H, t] = {cnorm:e}");
    }
}


