use conetrace::geometry::{from_derivatives, from_profile_samples, read_profile_csv, ProfileSample};
use proptest::prelude::*;

fn sample(f: impl Fn(f64) -> f64, n: usize, h: f64) -> Vec<ProfileSample<f64>> {
    (1..=n)
        .map(|i| {
            let r = h * i as f64;
            ProfileSample::new(r, f(r)).unwrap()
        })
        .collect()
}

#[test]
fn csv_round_trip_through_fit() {
    let mut text = String::from("r,f\n");
    for i in 1..=12 {
        let r = 0.01 * i as f64;
        text.push_str(&format!("{r},{}\n", 0.25 * r - 0.1 * r * r));
    }
    let s = read_profile_csv(text.as_bytes()).unwrap();
    let c = from_profile_samples(&s, 3).unwrap();
    assert!((c.fprime0 - 0.25).abs() < 1e-9);
    assert!((c.fsecond0 + 0.2).abs() < 1e-7);
}

proptest! {
    #[test]
    fn exact_polynomials_recovered(a in 0.05f64..3.0, b in -4.0f64..4.0, c in -10.0f64..10.0, deg3 in any::<bool>()) {
        let degree = if deg3 { 3 } else { 2 };
        let cc = if deg3 { c } else { 0.0 };
        let f = |r: f64| a * r + b * r * r / 2.0 + cc * r * r * r / 6.0;
        let h = 0.1 * a / (1.0 + b.abs() + cc.abs());
        let s = sample(f, 12, h / 12.0);
        let g = from_profile_samples(&s, degree).unwrap();
        prop_assert!((g.fprime0 - a).abs() <= 1e-8 * a);
        prop_assert!((g.fsecond0 - b).abs() <= 1e-8 * b.abs().max(1.0) / h);
    }

    #[test]
    fn rescaling_keeps_k_f(a in 0.05f64..5.0, b in -5.0f64..5.0, lambda in 0.1f64..10.0) {
        let c = from_derivatives(a, b).unwrap();
        let d = from_derivatives(lambda * a, lambda * b).unwrap();
        prop_assert!((c.k_f - d.k_f).abs() <= 1e-14 * c.k_f.abs().max(1.0));
        prop_assert!((d.alpha - c.alpha / lambda).abs() <= 1e-14 * c.alpha);
    }
}
