use std::f64::consts::PI;

use proptest::prelude::*;

use fraclab::constants::{p_of_q, sobolev_q};
use fraclab::funcspace::{make_indicator, VerySimpleFunction};
use fraclab::norms::{fundamental_function, lp_norm, modulus_of_continuity, PsiFunction};
use fraclab::spec::{FunctionSpec, GridSpec};
use fraclab::special::{ball_volume, beta, gamma, log_gamma};
use fraclab::QuadratureSpec;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn cheap() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.01f64..50.0) {
        prop_assert!(rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap()) < 1e-12);
    }

    #[test]
    fn gamma_reflection(x in 0.01f64..0.99) {
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        prop_assert!(rel(lhs, PI / (PI * x).sin()) < 1e-12);
    }

    #[test]
    fn log_gamma_matches_gamma(x in 0.05f64..120.0) {
        prop_assert!(rel(log_gamma(x).unwrap().exp(), gamma(x).unwrap()) < 1e-11);
    }

    #[test]
    fn beta_is_symmetric_and_matches_gamma(a in 0.05f64..20.0, b in 0.05f64..20.0) {
        let v = beta(a, b).unwrap();
        prop_assert!(rel(v, beta(b, a).unwrap()) < 1e-13);
        let g = gamma(a).unwrap() * gamma(b).unwrap() / gamma(a + b).unwrap();
        prop_assert!(rel(v, g) < 1e-11);
    }

    #[test]
    fn ball_volume_recursion(d in 3u32..40) {
        let lhs = ball_volume(d).unwrap();
        let rhs = 2.0 * PI / d as f64 * ball_volume(d - 2).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn sobolev_exponent_round_trip(alpha in 0.05f64..0.95, t in 0.01f64..0.99) {
        let p = 1.0 + (1.0 / alpha - 1.0) * t;
        let q = sobolev_q(p, alpha, 1).unwrap();
        prop_assert!(q > p);
        prop_assert!(rel(p_of_q(q, alpha, 1).unwrap(), p) < 1e-12);
    }

    #[test]
    fn function_spec_parse_never_panics(s in ".{0,40}") {
        let _ = FunctionSpec::parse(&s);
    }

    #[test]
    fn grid_spec_parse_never_panics(s in "[-0-9.e:,a-z ]{0,40}") {
        if let Ok(g) = GridSpec::parse(&s) {
            prop_assert!(g.points().iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn very_simple_parse_never_panics(s in "[-0-9.e,;:\n a-z]{0,60}") {
        let _ = VerySimpleFunction::parse(&s);
    }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn fundamental_function_is_nondecreasing(c in 0.1f64..10.0, s2 in 1.5f64..6.0, d1 in 0.01f64..20.0, d2 in 0.01f64..20.0) {
        let psi = PsiFunction::constant(c, 1.0, s2).unwrap();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = fundamental_function(&psi, lo).unwrap();
        let b = fundamental_function(&psi, hi).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12), "phi({lo}) = {a} > phi({hi}) = {b}");
    }

    #[test]
    fn indicator_norm_and_homogeneity(h1 in 0.0f64..0.5, w in 0.01f64..0.5, p in 1.0f64..8.0, c in -5.0f64..5.0) {
        let spec = QuadratureSpec::default();
        let g = make_indicator(h1, h1 + w).unwrap().function;
        let n = lp_norm(&g, p, &spec).unwrap();
        prop_assert!(rel(n, w.powf(1.0 / p)) < 1e-9);
        prop_assume!(c.abs() > 1e-3);
        prop_assert!(rel(lp_norm(&g.scale(c), p, &spec).unwrap(), c.abs() * n) < 1e-9);
    }

    #[test]
    fn indicator_modulus_is_monotone(w in 0.05f64..0.5, p in 1.0f64..6.0, d1 in 0.001f64..1.0, d2 in 0.001f64..1.0) {
        let spec = QuadratureSpec::default();
        let g = make_indicator(0.2, 0.2 + w).unwrap().function;
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = modulus_of_continuity(&g, lo, p, &spec).unwrap();
        let b = modulus_of_continuity(&g, hi, p, &spec).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-9));
        prop_assert!(rel(a, (2.0 * lo.min(w)).powf(1.0 / p)) < 1e-8);
    }

    #[test]
    fn very_simple_norm_matches_quadrature(c in proptest::collection::vec(-3.0f64..3.0, 1..5), p in 1.0f64..6.0) {
        prop_assume!(c.iter().any(|v| v.abs() > 1e-3));
        let starts: Vec<f64> = (0..c.len()).map(|k| 0.3 * k as f64).collect();
        let v = VerySimpleFunction::equal_step(0.2, starts, c).unwrap();
        let exact = v.lp_norm_exact(p).unwrap();
        let quad = lp_norm(&v.to_scalar().unwrap(), p, &QuadratureSpec::default()).unwrap();
        prop_assert!(rel(quad, exact) < 1e-9);
    }
}
