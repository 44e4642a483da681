use conetrace::quadrature::{integrate, integrate_singular, integrate_with, QuadOptions};
use proptest::prelude::*;

#[test]
fn log_endpoint_integrals() {
    let r = integrate(|u: f64| u.ln(), 0.0, 1.0, 1e-10).unwrap();
    assert!((r.value + 1.0).abs() < 1e-10);
    let r = integrate_singular(|u: f64| u.ln().powi(2), 0.0, 1.0, 1e-12).unwrap();
    assert!((r.value - 2.0).abs() < 1e-12);
    let r = integrate_singular(|u: f64| 1.0 / u.sqrt(), 0.0, 1.0, 1e-12).unwrap();
    assert!((r.value - 2.0).abs() < 1e-11);
}

#[test]
fn additivity_on_smooth_integrand() {
    let f = |u: f64| (3.0 * u).cos() * (-u).exp();
    let whole = integrate(f, 0.0, 1.0, 1e-13).unwrap();
    for c in [0.3, 0.7] {
        let a = integrate(f, 0.0, c, 1e-13).unwrap();
        let b = integrate(f, c, 1.0, 1e-13).unwrap();
        let slack = whole.err_est + a.err_est + b.err_est + 1e-15;
        assert!((a.value + b.value - whole.value).abs() <= slack);
    }
}

#[test]
fn reported_error_bounds_actual_error() {
    let exact = 2.0 / 3.0;
    for tol in [1e-4, 1e-8, 1e-12] {
        let r = integrate(|u: f64| u.sqrt(), 0.0, 1.0, tol).unwrap();
        assert!(r.converged);
        assert!((r.value - exact).abs() <= r.err_est.max(1e-15));
    }
}

#[test]
fn singular_mode_on_both_ends() {
    let f = |u: f64| 1.0 / (u * (1.0 - u)).powf(0.25);
    // B(3/4, 3/4)
    let want = 1.694_426_169_587_958_f64;
    let r = integrate_with(f, 0.0, 1.0, &QuadOptions::new(1e-11).singular()).unwrap();
    assert!((r.value - want).abs() < 1e-10);
}

proptest! {
    #[test]
    fn polynomial_integrals(c in prop::collection::vec(-3.0f64..3.0, 1..12), a in -2.0f64..0.0, b in 0.1f64..2.0) {
        let f = |x: f64| c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci);
        let prim = |x: f64| c.iter().enumerate().map(|(i, ci)| ci * x.powi(i as i32 + 1) / (i + 1) as f64).sum::<f64>();
        let want = prim(b) - prim(a);
        let r = integrate(f, a, b, 1e-13).unwrap();
        let scale = c.iter().map(|x| x.abs()).sum::<f64>() * 2f64.powi(c.len() as i32) * (b - a);
        prop_assert!((r.value - want).abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn deterministic(k in 1.0f64..20.0) {
        let f = |x: f64| (k * x).sin() / (1.0 + x * x);
        let a = integrate(f, 0.0, 3.0, 1e-12).unwrap();
        let b = integrate(f, 0.0, 3.0, 1e-12).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.n_evals, b.n_evals);
    }
}
