//! Real-argument gamma, log-gamma and digamma.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `B_{2k} / (2k (2k-1))` for k = 1..=8 (Stirling series for ln Γ).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `B_{2k} / (2k)` for k = 1..=7 (asymptotic series for ψ).
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

const LOG_GAMMA_SHIFT: f64 = 8.0;
const DIGAMMA_SHIFT: f64 = 10.0;

/// Natural log of Γ(x) for x > 0.
///
/// Arguments below 8 are shifted up with Γ(x+1) = xΓ(x) before the
/// Stirling series is applied.
pub fn log_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} is not a positive finite real")));
    }
    if x == T::one() || x == T::lit(2.0) {
        return Ok(T::zero());
    }
    let shift = T::lit(LOG_GAMMA_SHIFT);
    let mut y = x;
    let mut prod = T::one();
    while y < shift {
        prod = prod * y;
        y = y + T::one();
    }
    let half = T::lit(0.5);
    let inv = y.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    let mut pow = inv;
    for &c in STIRLING.iter() {
        series = series + T::lit(c) * pow;
        pow = pow * inv2;
    }
    let half_log_two_pi = T::lit(0.918_938_533_204_672_8);
    let stirling = (y - half) * y.ln() - y + half_log_two_pi + series;
    Ok(stirling - prod.ln())
}

/// ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("digamma", format!("x = {x} is not a positive finite real")));
    }
    let mut acc = T::zero();
    let mut y = x;
    let shift = T::lit(DIGAMMA_SHIFT);
    while y < shift {
        acc = acc - y.recip();
        y = y + T::one();
    }
    let inv2 = (y * y).recip();
    let mut pow = inv2;
    let mut series = T::zero();
    for &c in DIGAMMA_ASYMP.iter() {
        series = series + T::lit(c) * pow;
        pow = pow * inv2;
    }
    Ok(acc + y.ln() - T::lit(0.5) / y - series)
}

/// sin(πx) with exact zeros at the integers.
fn sin_pi<T: Real>(x: T) -> T {
    let n = x.round();
    let r = x - n;
    let s = (T::PI() * r).sin();
    let odd = (n / T::lit(2.0)).fract() != T::zero();
    if odd {
        -s
    } else {
        s
    }
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.floor()
}

/// Γ(x) on the real line; non-positive integers are poles.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if is_nonpositive_integer(x) {
        return Err(Error::domain("gamma", format!("pole at x = {x}")));
    }
    if x > T::zero() {
        return Ok(log_gamma(x)?.exp());
    }
    // reflection: Γ(x)Γ(1-x) = π / sin(πx)
    let g = log_gamma(T::one() - x)?.exp();
    Ok(T::PI() / (sin_pi(x) * g))
}

/// 1/Γ(x), entire; zero at the non-positive integers.
pub fn recip_gamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x > T::zero() {
        return (-log_gamma(x).expect("positive argument")).exp();
    }
    let g = log_gamma(T::one() - x).expect("positive argument").exp();
    sin_pi(x) * g / T::PI()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn log_gamma_spot_values() {
        assert!((log_gamma(0.5_f64).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
        assert_eq!(log_gamma(1.0_f64).unwrap(), 0.0);
        let want = (3.0 * PI.sqrt() / 4.0).ln();
        assert!((log_gamma(2.5_f64).unwrap() - want).abs() < 1e-14);
        // ln(100!) = ln Γ(101)
        let ln_fact_100 = (1..=100).map(|k| (k as f64).ln()).sum::<f64>();
        let got = log_gamma(101.0_f64).unwrap();
        assert!((got - ln_fact_100).abs() / ln_fact_100 < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0_f64).is_err());
        assert!(log_gamma(-1.5_f64).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        for &x in &[0.5, 1.3, 7.2, 41.0] {
            let lhs = log_gamma(x + 1.0_f64).unwrap().exp();
            let rhs = x * log_gamma(x).unwrap().exp();
            assert!((lhs - rhs).abs() / rhs < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn digamma_spot_values() {
        assert!((digamma(1.0_f64).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(2.0_f64).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        assert!((digamma(0.5_f64).unwrap() - (-EULER_GAMMA - 2.0 * LN_2)).abs() < 1e-14);
        assert!(digamma(0.0_f64).is_err());
    }

    /// ψ(x) = -γ + Σ_{n≥0} (1/(n+1) - 1/(n+x)), tail by Euler–Maclaurin.
    fn digamma_series(x: f64) -> f64 {
        let n_terms = 200_000usize;
        let mut s = 0.0;
        for n in (0..n_terms).rev() {
            let n = n as f64;
            s += 1.0 / (n + 1.0) - 1.0 / (n + x);
        }
        let n = n_terms as f64;
        let tail = ((n + x) / (n + 1.0)).ln() + 0.5 * (1.0 / (n + 1.0) - 1.0 / (n + x));
        -EULER_GAMMA + s + tail
    }

    #[test]
    fn digamma_against_series() {
        for &x in &[0.5, 0.75, 1.3, 3.7, 12.5, 150.0] {
            let got = digamma(x).unwrap();
            let want = digamma_series(x);
            assert!((got - want).abs() < 1e-12, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn gamma_reflection_and_poles() {
        assert!((gamma(-0.5_f64).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!(gamma(-2.0_f64).is_err());
        assert_eq!(recip_gamma(-3.0_f64), 0.0);
        assert!((recip_gamma(0.5_f64) - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!((gamma(5.0_f64).unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn f32_instantiation() {
        let v = log_gamma(2.5_f32).unwrap();
        assert!((v - (3.0 * std::f32::consts::PI.sqrt() / 4.0).ln()).abs() < 1e-6);
    }
}
