use std::f64::consts::PI;

use conetrace::coefficients::{
    asymptotic_constant, asymptotic_f, asymptotic_terms, b0, b1m, b_half, big_f, c1, c2m,
    h_alpha_at, heat_coefficients, heat_from_resolvent, i_j_closed, i_j_quad, psi_m,
    resolvent_coefficients, taylor_coefficient, ConeData, Provenance,
};
use conetrace::special_fn::{gamma, log_gamma};
use proptest::prelude::*;

// 50-digit mpmath evaluations of the defining integral
const F_ORACLE: [(f64, f64); 8] = [
    (0.05, 0.054_611_336_899_632_115),
    (0.1, 0.054_225_463_666_794_12),
    (0.2, 0.052_677_888_451_901_286),
    (0.5, 0.041_666_666_666_666_664),
    (1.0, 0.0),
    (2.0, -0.196_349_540_849_362_07),
    (3.2, -0.718_826_409_960_866_2),
    (8.0, -8.812_194_272_038_553),
];
const C0_ORACLE: f64 = 0.054_739_870_181_894_058_381_171_331_517_826_509_834;

// (alpha, s, value), mpmath in the u variable
const H_ALPHA_ORACLE: [(f64, f64, f64); 5] = [
    (2.0, -0.5, -0.589_048_622_548_086_2),
    (2.0, 0.3, -0.411_687_654_043_075_6),
    (0.5, 0.01, 0.330_608_521_468_728_54),
    (2.0, 0.01, -0.391_984_801_747_236_8),
    (0.7, 0.6, 0.176_214_595_771_205_4),
];

fn cone(a: f64, b: f64) -> ConeData<f64> {
    ConeData::new(a, b).unwrap()
}

#[test]
fn big_f_matches_high_precision_values() {
    for (a, want) in F_ORACLE {
        let tol = 1e-12;
        let r = big_f(a, tol).unwrap();
        assert!(r.converged, "alpha = {a}");
        assert!((r.value - want).abs() <= tol * want.abs().max(1.0), "alpha = {a}: {} vs {want}", r.value);
        assert!((r.value - want).abs() <= r.err_est.max(1e-15), "estimate too small at {a}");
    }
}

#[test]
fn big_f_closed_values() {
    let f = big_f(0.5_f64, 1e-13).unwrap().value;
    assert!((f - 1.0 / 24.0).abs() < 1e-14);
    let f = big_f(2.0, 1e-13).unwrap().value;
    assert!((f + PI / 16.0).abs() < 1e-14);
}

#[test]
fn constant_term_matches_high_precision_value() {
    let c0 = asymptotic_constant().unwrap();
    assert!((c0 - C0_ORACLE).abs() < 1e-14);
    let f = big_f(0.01, 1e-13).unwrap().value;
    assert!((f - c0).abs() < 1e-4);
}

#[test]
fn h_alpha_matches_high_precision_values() {
    for (a, s, want) in H_ALPHA_ORACLE {
        let r = h_alpha_at(a, s, 1e-10).unwrap();
        assert!((r.value - want).abs() < 1e-9, "alpha={a} s={s}: {} vs {want}", r.value);
    }
}

#[test]
fn h_alpha_at_zero_is_four_f_over_alpha() {
    for a in [0.3_f64, 0.5, 2.0, 4.5] {
        let h = h_alpha_at(a, 0.0, 1e-12).unwrap().value;
        let f = big_f(a, 1e-12).unwrap().value;
        assert!((h - 4.0 * f / a).abs() < 1e-11 * (1.0 + h.abs()), "alpha = {a}");
    }
}

#[test]
fn b_half_from_every_resolvent_power() {
    for (fp, fs) in [(0.5, 1.0), (2.0, -0.3), (0.3, 0.7)] {
        let c = cone(fp, fs);
        let bh = b_half(&c, 1e-12).unwrap().value;
        for m in 2..=6 {
            let b1 = b1m(&c, m, 1e-12).unwrap().value;
            let (via, c_half) = heat_from_resolvent(1, m, b1, 0.0).unwrap();
            assert_eq!(c_half, 0.0);
            assert!((via - bh).abs() <= 1e-10 * bh.abs(), "cone ({fp}, {fs}) m={m}");
            let direct = gamma(m as f64).unwrap() / gamma(m as f64 + 0.5).unwrap() * b1;
            assert!((direct - bh).abs() <= 1e-10 * bh.abs());
        }
    }
}

#[test]
fn b_half_known_value() {
    // k_f = -2, alpha = 2, F(2) = -π/16
    let b = b_half(&cone(0.5, 1.0), 1e-12).unwrap().value;
    assert!((b + PI.sqrt() / 8.0).abs() < 1e-13);
}

#[test]
fn b_half_scaling_law() {
    let base = cone(0.4, 0.9);
    for lambda in [0.5, 2.0, 3.0] {
        let scaled = base.rescaled(lambda).unwrap();
        assert!((scaled.k_f - base.k_f).abs() < 1e-15);
        assert!((scaled.alpha - base.alpha / lambda).abs() < 1e-15);
        let b = b_half(&scaled, 1e-12).unwrap().value;
        let f = big_f(base.alpha / lambda, 1e-12).unwrap().value;
        let want = -2.0 * base.k_f / PI.sqrt() / (base.alpha / lambda) * f;
        assert!((b - want).abs() < 1e-13 * want.abs().max(1.0));
    }
}

#[test]
fn coefficient_records() {
    let c = cone(1.0 / 3.0, 0.0);
    let h = heat_coefficients(&c, 1e-10).unwrap();
    assert!((h.b0 - 2.0 / 9.0).abs() < 1e-15);
    assert_eq!((h.b_half, h.c0, h.c_half, h.c1), (0.0, 0.0, 0.0, 0.0));
    let c = cone(0.5, 1.0);
    let r = resolvent_coefficients(&c, 3, 1e-10).unwrap();
    assert_eq!(r.b0m, b0(&c));
    assert!((r.c2m - 3.0 / 30.0 * 2.0).abs() < 1e-15);
    assert!(resolvent_coefficients(&c, 1, 1e-10).is_err());
}

#[test]
fn psi_matches_gamma_ratio_away_from_zero() {
    for m in [2u32, 3, 5] {
        for s in [-0.7, -0.3, 0.4, 0.9] {
            let want = gamma(m as f64 + 0.5 + s / 2.0).unwrap() * gamma(-s / 2.0).unwrap()
                / gamma(-s).unwrap();
            let got = psi_m(m, s).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs(), "m={m} s={s}");
        }
    }
}

#[test]
fn odd_i_j_quadrature_matches_closed_form() {
    for j in [1, 3, 5, 7, 9] {
        let q = i_j_quad(j, 1e-13).unwrap();
        let c: f64 = i_j_closed(j).unwrap();
        assert!((q.value - c).abs() <= 1e-11 * c.abs(), "j = {j}");
    }
}

#[test]
fn asymptotic_table_provenance() {
    let terms = asymptotic_terms(4, 1e-12).unwrap();
    assert_eq!(terms.len(), 4);
    assert_eq!(terms[0].i_j_provenance, Provenance::ClosedForm);
    assert_eq!(terms[1].i_j_provenance, Provenance::Quadrature);
    assert_eq!(terms[1].coefficient, 0.0);
    assert_eq!(terms[1].i_j2_provenance, Provenance::Quadrature);
    assert!(terms[1].i_j > 0.0);
}

#[test]
fn asymptotic_residual_shrinks_with_order() {
    let a = 0.1_f64;
    let f = big_f(a, 1e-14).unwrap().value;
    let r1 = (f - asymptotic_f(a, 1).unwrap()).abs();
    let r3 = (f - asymptotic_f(a, 3).unwrap()).abs();
    assert!(r3 < r1 * 1e-2);
    // the first omitted term dominates the residual
    let next = taylor_coefficient(5).unwrap() * a.powi(8);
    assert!((r3 - next.abs()).abs() < 0.05 * next.abs());
}

#[test]
fn f32_path_runs() {
    let r = big_f(2.0_f32, 1e-5).unwrap();
    assert!((r.value + std::f32::consts::PI / 16.0).abs() < 1e-5);
    let l: f32 = log_gamma(3.0_f32).unwrap();
    assert!((l - 2.0_f32.ln()).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn b0_is_odd_under_inversion(a in 0.05f64..20.0) {
        let x = b0(&cone(a, 0.0));
        let y = b0(&cone(1.0 / a, 0.0));
        prop_assert!((x + y).abs() <= 1e-14 * (1.0 + x.abs()));
    }

    #[test]
    fn c1_round_trip_independent_of_m(a in 0.05f64..10.0, b in -5.0f64..5.0, m in 2u32..40) {
        let c = cone(a, b);
        let (_, back) = heat_from_resolvent(2, m, 0.0, c2m(&c, m).unwrap()).unwrap();
        let want = c1(&c);
        prop_assert!((back - want).abs() <= 1e-12 * want.abs().max(1e-300));
    }

    #[test]
    fn b_half_linear_in_second_derivative(a in 0.2f64..5.0, b in 0.1f64..3.0) {
        let x = b_half(&cone(a, b), 1e-10).unwrap().value;
        let y = b_half(&cone(a, 2.0 * b), 1e-10).unwrap().value;
        prop_assert!((y - 2.0 * x).abs() <= 4.0 * f64::EPSILON * y.abs());
    }

    #[test]
    fn heat_from_resolvent_zero_order(m in 2u32..60, b in -10.0f64..10.0) {
        let (bb, cc) = heat_from_resolvent(0, m, b, 0.0).unwrap();
        prop_assert!((bb - b).abs() <= 1e-13 * b.abs());
        prop_assert_eq!(cc, 0.0);
    }

    #[test]
    fn f_is_finite_and_decreasing_beyond_one(a in 1.05f64..6.0) {
        let x = big_f(a, 1e-10).unwrap().value;
        let y = big_f(a + 0.05, 1e-10).unwrap().value;
        prop_assert!(x < 0.0 && y < x);
    }
}
