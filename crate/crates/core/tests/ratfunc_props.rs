//! Randomized algebraic property tests for the exact rational-function layer.

use num_complex::Complex64;
use proptest::prelude::*;
use yangian_kit::gaussian::Gaussian;
use yangian_kit::poly::Poly;
use yangian_kit::ratfunc::RatFunc;

fn gaussian_strategy() -> impl Strategy<Value = Gaussian> {
    (-6i64..7, 1i64..5, -6i64..7, 1i64..5)
        .prop_map(|(a, b, c, d)| &Gaussian::rat(a, b) + &Gaussian::rat_i(c, d))
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(gaussian_strategy(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(3), poly_strategy(2))
        .prop_filter_map("nonzero denominator", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                Some(RatFunc::new(n, d).unwrap())
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_commutes_and_associates(f in ratfunc_strategy(), g in ratfunc_strategy(), h in ratfunc_strategy()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
    }

    #[test]
    fn multiplication_distributes(f in ratfunc_strategy(), g in ratfunc_strategy(), h in ratfunc_strategy()) {
        let lhs = &f * &(&g + &h);
        let rhs = &(&f * &g) + &(&f * &h);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplicative_inverse(f in ratfunc_strategy()) {
        prop_assume!(!f.is_zero());
        let inv = f.inv().unwrap();
        prop_assert!((&f * &inv).is_one());
    }

    #[test]
    fn subtraction_detects_equality(f in ratfunc_strategy(), g in ratfunc_strategy()) {
        let d = &f - &g;
        prop_assert_eq!(d.is_zero(), f == g);
    }

    #[test]
    fn eval_commutes_with_arithmetic(f in ratfunc_strategy(), g in ratfunc_strategy()) {
        // eval(f·g) = eval(f)·eval(g) and eval(f+g) = eval(f)+eval(g) away
        // from poles, to 1e−12 relative
        let x = Complex64::new(0.731, 0.413);
        let (Ok(fv), Ok(gv)) = (f.eval(x), g.eval(x)) else { return Ok(()) };
        if let Ok(pv) = (&f * &g).eval(x) {
            let scale = pv.norm().max(1.0);
            prop_assert!((pv - fv * gv).norm() < 1e-12 * scale.max((fv * gv).norm()));
        }
        if let Ok(sv) = (&f + &g).eval(x) {
            let scale = sv.norm().max(1.0);
            prop_assert!((sv - (fv + gv)).norm() < 1e-12 * scale.max((fv + gv).norm()));
        }
    }

    #[test]
    fn parse_display_roundtrip(f in ratfunc_strategy()) {
        let shown = f.pretty('u');
        let back = RatFunc::parse(&shown, 'u').unwrap();
        prop_assert_eq!(f, back);
    }
}
