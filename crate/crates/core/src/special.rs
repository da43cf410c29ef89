//! Complex log-Gamma and the adaptive quadrature used by the scattering
//! integrals.

use crate::error::{Error, Result};
use num_complex::Complex64;

type C = Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(z) for complex z by the Lanczos approximation, shifting the argument
/// into Re z ≥ 0.5 with the recurrence Γ(z+1) = zΓ(z). The result may differ
/// from the principal branch by multiples of 2πi, which cancel whenever the
/// sum of logs is exponentiated.
pub fn ln_gamma(mut z: C) -> C {
    let mut shift = C::new(0.0, 0.0);
    while z.re < 0.5 {
        // Γ(z) = Γ(z+1)/z
        shift -= z.ln();
        z += 1.0;
    }
    let zm1 = z - 1.0;
    let mut x = C::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    let half_log_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    shift + half_log_2pi + (zm1 + 0.5) * t.ln() - t + x.ln()
}

/// Γ-ratio Γ(a)/Γ(b) via exponentiated log difference.
pub fn gamma_ratio(a: C, b: C) -> Result<C> {
    for z in [a, b] {
        if z.im.abs() < 1e-12 && z.re <= 1e-12 && (z.re - z.re.round()).abs() < 1e-12 {
            return Err(Error::Pole);
        }
    }
    Ok((ln_gamma(a) - ln_gamma(b)).exp())
}

/// Adaptive Simpson quadrature with a recursion-depth guard.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(_f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(f, a, fa, m, fm, flm);
        let right = simpson(f, m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                + rec(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(f, a, fa, b, fb, fm);
    rec(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// ∫₀^∞ f, for integrands decaying at least exponentially: fixed-width
/// segments are accumulated until their contribution is negligible.
pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, tol: f64) -> Result<f64> {
    let seg = 8.0;
    let mut acc = 0.0;
    let mut a = 0.0;
    for _ in 0..64 {
        let part = adaptive_simpson(f, a, a + seg, tol / 8.0);
        acc += part;
        a += seg;
        if a >= 24.0 && part.abs() < tol / 4.0 {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence("half-line integrand did not decay".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ln_gamma_known_values() {
        let cases = [
            (C::new(0.5, 0.0), PI.sqrt().ln()),
            (C::new(1.0, 0.0), 0.0),
            (C::new(4.0, 0.0), 6.0f64.ln()),
        ];
        for (z, expect) in cases {
            let got = ln_gamma(z);
            assert!((got.re - expect).abs() < 1e-12 && got.im.abs() < 1e-12, "{z} -> {got}");
        }
    }

    #[test]
    fn duplication_formula_random_points() {
        // 2^{2x−1} Γ(x+1/2) Γ(x) = √π Γ(2x)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let x = C::new(rng.gen_range(0.1..3.0), rng.gen_range(-1.5..1.5));
            let lhs = (2.0 * x - 1.0) * C::new(2.0f64.ln(), 0.0)
                + ln_gamma(x + 0.5)
                + ln_gamma(x);
            let rhs = C::new(PI.sqrt().ln(), 0.0) + ln_gamma(2.0 * x);
            let ratio = (lhs - rhs).exp();
            assert!(
                (ratio - C::new(1.0, 0.0)).norm() < 1e-12,
                "duplication failed at {x}: {ratio}"
            );
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = C::new(0.3, 0.8);
        let a = ln_gamma(z);
        let b = ln_gamma(z.conj());
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn simpson_basics() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let v = integrate_half_line(&|x: f64| (-x).exp(), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }
}
