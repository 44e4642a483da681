//! Heat- and resolvent-trace coefficients contributed by the cone point.
//!
//! Closed forms: `b_0`, `c_0 = c_{1/2} = 0`, `c_1`, `c_{2,m}`. Quadrature:
//! the scaling function `F(α)`, from which `b_{1/2} = -(2 k_f/√π) F(α)/α`,
//! and the Mellin-type integral `h_α(s)` that feeds `b_{1,m}`.
//!
//! The small-α expansion of `F` is
//!
//! ```text
//! F(α) = C_0 + (I_1/48) α² + Σ_{j odd} V_j B_{j+3} α^{j+3} + ...
//! V_j  = -( I_j / (j! (j+3)) - I_{j+2} / (4 (j+3)!) )
//! I_j  = ∫_0^1 (log u²)^j / (1 - u²) du
//! ```
//!
//! `V_j` is the difference of two nearly equal terms (relative gap about
//! `3^{-j}`), so it is evaluated in rational arithmetic with a 100-digit
//! value of π before rounding.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hfun::{h_hat, h_hat_sq, phi_hat_sq, series_window};
use crate::quadrature::{integrate_with, QuadOptions, QuadResult};
use crate::scalar::Real;
use crate::special_fn::{digamma, log_gamma, rational_to_f64, recip_gamma, shared_bernoulli};

/// Tolerance used for the cached constant term `C_0`.
pub const ASYMPTOTIC_CONSTANT_TOL: f64 = 1e-13;

/// π to 100 decimal places.
const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Source of a reported number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    Series,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Quadrature => "quadrature",
            Provenance::Series => "series",
        }
    }
}

/// Second-order germ `(f'(0), f''(0))` of the warping function at the tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeData<T> {
    pub fprime0: T,
    pub fsecond0: T,
    /// `1 / f'(0)`.
    pub alpha: T,
    /// `-f''(0) / f'(0)`.
    pub k_f: T,
}

impl<T: Real> ConeData<T> {
    pub fn new(fprime0: T, fsecond0: T) -> Result<Self> {
        if !(fprime0 > T::zero()) || !fprime0.is_finite() {
            return Err(Error::Validation(format!(
                "f'(0) = {fprime0} must be positive and finite"
            )));
        }
        if !fsecond0.is_finite() {
            return Err(Error::Validation(format!("f''(0) = {fsecond0} must be finite")));
        }
        Ok(Self {
            fprime0,
            fsecond0,
            alpha: fprime0.recip(),
            k_f: -fsecond0 / fprime0,
        })
    }

    /// Germ of `λ f`.
    pub fn rescaled(&self, lambda: T) -> Result<Self> {
        Self::new(lambda * self.fprime0, lambda * self.fsecond0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCoefficients<T> {
    pub b0: T,
    pub b_half: T,
    pub b_half_err: T,
    pub c0: T,
    pub c_half: T,
    pub c1: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventCoefficients<T> {
    pub m: u32,
    pub b0m: T,
    pub b1m: T,
    pub b1m_err: T,
    pub c2m: T,
}

/// `b_0 = (1/f'(0) - f'(0)) / 12`.
pub fn b0<T: Real>(cone: &ConeData<T>) -> T {
    (cone.fprime0.recip() - cone.fprime0) / T::lit(12.0)
}

/// [`b0`] in exact rational arithmetic.
pub fn b0_exact(fprime0: &BigRational) -> Result<BigRational> {
    if !fprime0.is_positive() {
        return Err(Error::Validation("f'(0) must be positive".into()));
    }
    Ok((fprime0.recip() - fprime0) / BigRational::from_integer(BigInt::from(12)))
}

/// `c_1 = -f''(0)² / (60 f'(0))`.
pub fn c1<T: Real>(cone: &ConeData<T>) -> T {
    -cone.fsecond0 * cone.fsecond0 / (T::lit(60.0) * cone.fprime0)
}

/// `c_{2,m} = m f''(0)² / (30 f'(0))`, `m >= 2`.
pub fn c2m<T: Real>(cone: &ConeData<T>, m: u32) -> Result<T> {
    check_m("c2m", m)?;
    let m = T::lit(m as f64);
    Ok(m * cone.fsecond0 * cone.fsecond0 / (T::lit(30.0) * cone.fprime0))
}

fn check_m(op: &'static str, m: u32) -> Result<()> {
    if m >= 2 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("m = {m} must be at least 2")))
    }
}

fn combine<T: Real>(parts: &[QuadResult<T>], tol: T) -> QuadResult<T> {
    let value = parts.iter().fold(T::zero(), |acc, p| acc + p.value);
    let err_est = parts.iter().fold(T::zero(), |acc, p| acc + p.err_est);
    QuadResult {
        value,
        err_est,
        n_evals: parts.iter().map(|p| p.n_evals).sum(),
        converged: parts.iter().all(|p| p.converged) && err_est <= tol * value.abs().max(T::one()),
    }
}

/// Integrates `g(u)` over `[0, 1]`, split where the `ĥ`/`Φ̂` route changes
/// (`u = e^{-window/2}`). The lower piece runs in the tanh-sinh variable
/// when `singular_lower` is set.
fn integrate_unit_split<T: Real, G: Fn(T) -> T>(
    g: G,
    window: T,
    singular_lower: bool,
    tol: T,
) -> Result<QuadResult<T>> {
    let u_c = (-window / T::lit(2.0)).exp();
    let mut lower_opts = QuadOptions::new(tol);
    lower_opts.endpoint_singular = singular_lower;
    let lower = integrate_with(&g, T::zero(), u_c, &lower_opts)?;
    let upper = integrate_with(&g, u_c, T::one(), &QuadOptions::new(tol))?;
    Ok(combine(&[lower, upper], tol))
}

/// Pointwise series tolerance used inside integrands.
fn pointwise_tol<T: Real>() -> T {
    T::epsilon() * T::lit(0.25)
}

/// `α (ĥ_{2,α} - ĥ_{0,α}/4)(1 - u²)`, the integrand of `F`.
pub fn big_f_integrand<T: Real>(alpha: T, u: T) -> Result<T> {
    let tol = pointwise_tol();
    let h2 = h_hat_sq(2, alpha, u, tol)?.value;
    let h0 = h_hat_sq(0, alpha, u, tol)?.value;
    Ok(alpha * (h2 - h0 / T::lit(4.0)))
}

/// Runs `integrand` under a quadrature that expects an infallible closure,
/// surfacing the first error afterwards.
fn with_fallible<T: Real, G, R>(integrand: G, run: R) -> Result<QuadResult<T>>
where
    G: Fn(T) -> Result<T>,
    R: FnOnce(&dyn Fn(T) -> T) -> Result<QuadResult<T>>,
{
    let first_err: std::sync::Mutex<Option<Error>> = std::sync::Mutex::new(None);
    let f = |u: T| match integrand(u) {
        Ok(v) => v,
        Err(e) => {
            let mut slot = first_err.lock().expect("poisoned");
            if slot.is_none() {
                *slot = Some(e);
            }
            T::zero()
        }
    };
    let r = run(&f)?;
    if let Some(e) = first_err.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(r)
}

/// `F(α) = ∫_0^1 α (ĥ_{2,α} - ĥ_{0,α}/4)(1 - u²) du`.
pub fn big_f<T: Real>(alpha: T, tol: T) -> Result<QuadResult<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::domain("big_f", format!("alpha = {alpha} must be positive")));
    }
    if !(tol > T::zero()) {
        return Err(Error::domain("big_f", "tolerance must be positive"));
    }
    let singular = alpha < T::lit(0.5);
    with_fallible(
        |u| big_f_integrand(alpha, u),
        |f| integrate_unit_split(f, series_window(alpha), singular, tol),
    )
}

/// `b_{1/2} = -(2 k_f / √π) F(α) / α`, with the error estimate scaled alike.
pub fn b_half<T: Real>(cone: &ConeData<T>, tol: T) -> Result<QuadResult<T>> {
    let f = big_f(cone.alpha, tol)?;
    let scale = -T::lit(2.0) * cone.k_f / (T::PI().sqrt() * cone.alpha);
    Ok(QuadResult {
        value: scale * f.value,
        err_est: scale.abs() * f.err_est,
        ..f
    })
}

/// `h_α(s) = ∫_0^1 (2ĥ_{2,α}(t) - ĥ_{0,α}(t)/2)(1-t)^{s/2-1/2} t^{-s} dt`
/// for real `s ∈ (-1, 1)`, integrated in `t` near 0 and in `u = √(1-t)` near 1.
pub fn h_alpha_at<T: Real>(alpha: T, s: T, tol: T) -> Result<QuadResult<T>> {
    if !(s > -T::one() && s < T::one()) {
        return Err(Error::domain("h_alpha_at", format!("s = {s} not in (-1, 1)")));
    }
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::domain("h_alpha_at", format!("alpha = {alpha} must be positive")));
    }
    let ptol = pointwise_tol();
    let two = T::lit(2.0);
    let core = |h2: T, h0: T| two * h2 - h0 / two;
    // near t = 0 in t itself, so that t^{-s} keeps full precision
    let near_zero = |t: T| -> Result<T> {
        let c = core(h_hat(2, alpha, t, ptol)?.value, h_hat(0, alpha, t, ptol)?.value);
        if s == T::zero() {
            return Ok(c / (T::one() - t).sqrt());
        }
        Ok(c * (T::one() - t).powf(s / two - T::lit(0.5)) * t.powf(-s))
    };
    // near t = 1 in u = sqrt(1 - t): dt = -2u du, (1-t)^{s/2-1/2} = u^{s-1}
    let near_one = |u: T| -> Result<T> {
        let c = core(h_hat_sq(2, alpha, u, ptol)?.value, h_hat_sq(0, alpha, u, ptol)?.value);
        if s == T::zero() {
            return Ok(two * c);
        }
        let t = (T::one() - u) * (T::one() + u);
        Ok(two * c * u.powf(s) * t.powf(-s))
    };
    let w = series_window(alpha);
    let u_c = (-w / two).exp();
    let t_c = -(-w).exp_m1();
    let mut u_opts = QuadOptions::new(tol);
    u_opts.endpoint_singular = s != T::zero() || alpha < T::lit(0.5);
    let mut t_opts = QuadOptions::new(tol);
    t_opts.endpoint_singular = s > T::zero();
    let upper = with_fallible(near_one, |f| integrate_with(f, T::zero(), u_c, &u_opts))?;
    let lower = with_fallible(near_zero, |f| integrate_with(f, T::zero(), t_c, &t_opts))?;
    Ok(combine(&[lower, upper], tol))
}

/// `ψ_m(s) = Γ(m + 1/2 + s/2) Γ(-s/2) / Γ(-s)`, holomorphic at `s = 0`
/// with `ψ_m(0) = 2 Γ(m + 1/2)`.
pub fn psi_m<T: Real>(m: u32, s: T) -> Result<T> {
    check_m("psi_m", m)?;
    let mf = T::lit(m as f64);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let first_arg = mf + half + s / two;
    if first_arg <= T::zero() && first_arg == first_arg.floor() {
        return Err(Error::domain("psi_m", format!("pole at s = {s}")));
    }
    let first = if first_arg > T::zero() {
        log_gamma(first_arg)?.exp()
    } else {
        recip_gamma(first_arg).recip()
    };
    if s == T::zero() {
        return Ok(two * first);
    }
    // Γ(-s/2)/Γ(-s) = 2 Γ(1 - s/2) / Γ(1 - s)
    let a = T::one() - s / two;
    let b = T::one() - s;
    let a_pole = a <= T::zero() && a == a.floor();
    let b_pole = b <= T::zero() && b == b.floor();
    let ratio = match (a_pole, b_pole) {
        (false, _) => recip_gamma(b) / recip_gamma(a),
        // s = 2n: ratio of residues, 2 (-1)^n (2n-1)! / (n-1)!
        (true, true) => {
            let n = (s / two).round();
            let sign = if (n.to_i64().unwrap_or(0)) % 2 == 0 {
                T::one()
            } else {
                -T::one()
            };
            let lg = log_gamma(two * n)? - log_gamma(n)?;
            sign * two * lg.exp()
        }
        (true, false) => unreachable!("Γ(1-s/2) has a pole only when Γ(1-s) does"),
    };
    Ok(two * first * ratio)
}

fn factorial_minus_one<T: Real>(m: u32) -> Result<T> {
    Ok(log_gamma(T::lit(m as f64))?.exp())
}

/// `b_{1,m} = -k_f ψ_m(0) h_α(0) / (4 √π (m-1)!)`.
pub fn b1m<T: Real>(cone: &ConeData<T>, m: u32, tol: T) -> Result<QuadResult<T>> {
    check_m("b1m", m)?;
    let h = h_alpha_at(cone.alpha, T::zero(), tol)?;
    let psi = psi_m(m, T::zero())?;
    let scale =
        -cone.k_f * psi / (T::lit(4.0) * T::PI().sqrt() * factorial_minus_one::<T>(m)?);
    Ok(QuadResult {
        value: scale * h.value,
        err_est: scale.abs() * h.err_est,
        ..h
    })
}

/// Converts resolvent coefficients `(b_{j,m}, c_{j,m})` into the heat
/// coefficients `(b_{j/2}, c_{j/2})`.
pub fn heat_from_resolvent<T: Real>(j: u32, m: u32, bjm: T, cjm: T) -> Result<(T, T)> {
    check_m("heat_from_resolvent", m)?;
    let mf = T::lit(m as f64);
    let arg = mf + T::lit(j as f64) / T::lit(2.0);
    // (m-1)! / Γ(m + j/2)
    let ratio = (log_gamma(mf)? - log_gamma(arg)?).exp();
    let two = T::lit(2.0);
    let b = ratio * bjm + ratio * digamma(arg)? / two * cjm;
    let c = -ratio / two * cjm;
    Ok((b, c))
}

/// `τ_j(u) = (log u²)^j / (1 - u²)`, continuous at `u = 1`.
pub fn tau_j<T: Real>(j: u32, u: T) -> T {
    if u == T::one() {
        return if j == 1 { -T::one() } else { T::zero() };
    }
    let lg = T::lit(2.0) * u.ln();
    lg.powi(j as i32) / ((T::one() - u) * (T::one() + u))
}

/// `I_j = ∫_0^1 τ_j(u) du` by quadrature.
pub fn i_j_quad<T: Real>(j: u32, tol: T) -> Result<QuadResult<T>> {
    if j == 0 {
        return Err(Error::domain("i_j_quad", "j must be at least 1"));
    }
    integrate_with(
        |u| tau_j(j, u),
        T::zero(),
        T::one(),
        &QuadOptions::new(tol).singular(),
    )
}

/// Rational `r_j` with `I_j = r_j π^{j+1}` for odd `j = 2n - 1`:
/// `r_j = 2^{2n-1} (1 - 2^{2n}) |B_{2n}| / (4n)`.
pub fn i_j_closed_coefficient(j: u32) -> Result<BigRational> {
    if j.is_multiple_of(2) {
        return Err(Error::domain(
            "i_j_closed",
            format!("no closed form for even j = {j}"),
        ));
    }
    let n = (j as usize).div_ceil(2);
    let b = shared_bernoulli().get(2 * n)?.abs();
    let two = BigInt::from(2);
    let p = num_traits::pow(two.clone(), 2 * n - 1);
    let q = BigInt::one() - num_traits::pow(two, 2 * n);
    Ok(BigRational::from_integer(p * q) * b / BigRational::from_integer(BigInt::from(4 * n)))
}

/// Closed form of `I_j` for odd `j`.
pub fn i_j_closed<T: Real>(j: u32) -> Result<T> {
    let r = rational_to_f64(&i_j_closed_coefficient(j)?);
    Ok(T::lit(r) * T::PI().powi(j as i32 + 1))
}

pub(crate) fn pi_rational() -> &'static BigRational {
    static PI: OnceLock<BigRational> = OnceLock::new();
    PI.get_or_init(|| {
        let numer: BigInt = PI_DIGITS.parse().expect("digits");
        let denom = num_traits::pow(BigInt::from(10), PI_DIGITS.len() - 1);
        BigRational::new(numer, denom)
    })
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `V_j` for odd `j`, evaluated with 100-digit π so the cancellation
/// between its two terms costs nothing at double precision.
pub fn v_j_high_precision(j: u32) -> Result<f64> {
    if j.is_multiple_of(2) {
        return Err(Error::domain("v_j", format!("V_j is defined for odd j, got {j}")));
    }
    let ju = j as usize;
    let r_j = i_j_closed_coefficient(j)?;
    let r_j2 = i_j_closed_coefficient(j + 2)?;
    let pi = pi_rational();
    let pi_pow = num_traits::pow(pi.clone(), ju + 1);
    let pi_pow2 = &pi_pow * pi * pi;
    let d1 = BigRational::from_integer(factorial_big(ju) * BigInt::from(ju + 3));
    let d2 = BigRational::from_integer(factorial_big(ju + 3) * BigInt::from(4));
    let v = -(r_j * pi_pow / d1) + r_j2 * pi_pow2 / d2;
    Ok(rational_to_f64(&v))
}

/// Coefficient of `α^{j+3}` in the Taylor series of `F` at 0, `V_j B_{j+3}`
/// (zero for even `j`).
pub fn taylor_coefficient(j: u32) -> Result<f64> {
    if j == 0 {
        return Err(Error::domain("taylor_coefficient", "j must be at least 1"));
    }
    let b = shared_bernoulli().get_f64(j as usize + 3)?;
    if j.is_multiple_of(2) || b == 0.0 {
        return Ok(0.0);
    }
    Ok(v_j_high_precision(j)? * b)
}

/// `C_0 = -∫_0^1 (Φ̂_2 - Φ̂_0/4)(1 - u²) du`, the value of `F` at `α = 0`.
pub fn asymptotic_constant_with_tol(tol: f64) -> Result<QuadResult<f64>> {
    with_fallible(
        |u: f64| -> Result<f64> { Ok(-(phi_hat_sq(2, u)? - phi_hat_sq(0, u)? / 4.0)) },
        |f| integrate_unit_split(f, 1.0, true, tol),
    )
}

/// [`asymptotic_constant_with_tol`] at [`ASYMPTOTIC_CONSTANT_TOL`], computed
/// once per process.
pub fn asymptotic_constant() -> Result<f64> {
    static C0: OnceLock<Result<f64>> = OnceLock::new();
    C0.get_or_init(|| asymptotic_constant_with_tol(ASYMPTOTIC_CONSTANT_TOL).map(|r| r.value))
        .clone()
}

/// One row of the small-α expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerm {
    pub j: u32,
    pub i_j: f64,
    pub i_j_provenance: Provenance,
    pub i_j2: f64,
    pub i_j2_provenance: Provenance,
    /// Coefficient of `α^{j+3}`.
    pub coefficient: f64,
}

fn i_j_any(j: u32, tol: f64) -> Result<(f64, Provenance)> {
    if j % 2 == 1 {
        Ok((i_j_closed(j)?, Provenance::ClosedForm))
    } else {
        Ok((i_j_quad(j, tol)?.value, Provenance::Quadrature))
    }
}

/// Terms `j = 1..=r` of the expansion, even `j` included with their
/// quadrature-only `I_j`.
pub fn asymptotic_terms(r: u32, tol: f64) -> Result<Vec<AsymptoticTerm>> {
    if r == 0 {
        return Err(Error::domain("asymptotic_terms", "order r must be at least 1"));
    }
    (1..=r)
        .map(|j| {
            let (i_j, p1) = i_j_any(j, tol)?;
            let (i_j2, p2) = i_j_any(j + 2, tol)?;
            Ok(AsymptoticTerm {
                j,
                i_j,
                i_j_provenance: p1,
                i_j2,
                i_j2_provenance: p2,
                coefficient: taylor_coefficient(j)?,
            })
        })
        .collect()
}

/// `C_0 + (I_1/48) α² + Σ_{j=1}^{r} V_j B_{j+3} α^{j+3}`.
pub fn asymptotic_f<T: Real>(alpha: T, r: u32) -> Result<T> {
    if r == 0 {
        return Err(Error::domain("asymptotic_f", "order r must be at least 1"));
    }
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::domain("asymptotic_f", format!("alpha = {alpha} must be >= 0")));
    }
    let c0 = T::lit(asymptotic_constant()?);
    let i1: T = i_j_closed(1)?;
    let a2 = alpha * alpha;
    let mut value = c0 + i1 / T::lit(48.0) * a2;
    for j in 1..=r {
        let c = taylor_coefficient(j)?;
        if c != 0.0 {
            value = value + T::lit(c) * alpha.powi(j as i32 + 3);
        }
    }
    Ok(value)
}

/// All heat coefficients of the cone point.
pub fn heat_coefficients<T: Real>(cone: &ConeData<T>, tol: T) -> Result<HeatCoefficients<T>> {
    let bh = b_half(cone, tol)?;
    if !bh.converged {
        return Err(Error::NonConvergence {
            op: "b_half",
            detail: format!("error estimate {} above tolerance {tol}", bh.err_est),
        });
    }
    Ok(HeatCoefficients {
        b0: b0(cone),
        b_half: bh.value,
        b_half_err: bh.err_est,
        c0: T::zero(),
        c_half: T::zero(),
        c1: c1(cone),
    })
}

/// Resolvent-side coefficients for the power `m`.
pub fn resolvent_coefficients<T: Real>(
    cone: &ConeData<T>,
    m: u32,
    tol: T,
) -> Result<ResolventCoefficients<T>> {
    let b1 = b1m(cone, m, tol)?;
    if !b1.converged {
        return Err(Error::NonConvergence {
            op: "b1m",
            detail: format!("error estimate {} above tolerance {tol}", b1.err_est),
        });
    }
    Ok(ResolventCoefficients {
        m,
        b0m: b0(cone),
        b1m: b1.value,
        b1m_err: b1.err_est,
        c2m: c2m(cone, m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cone(a: f64, b: f64) -> ConeData<f64> {
        ConeData::new(a, b).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cone_validation() {
        assert!(ConeData::new(0.0, 1.0).is_err());
        assert!(ConeData::new(-1.0, 1.0).is_err());
        assert!(ConeData::new(1.0, f64::NAN).is_err());
        let c = cone(0.5, 1.0);
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.k_f, -2.0);
    }

    #[test]
    fn b0_values() {
        assert_eq!(b0(&cone(1.0, 0.0)), 0.0);
        assert!((b0(&cone(1.0 / 3.0, 0.0)) - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(b0(&cone(2.0, 0.0)), -1.0 / 8.0);
        assert_eq!(b0_exact(&rat(1, 3)).unwrap(), rat(2, 9));
        assert_eq!(b0_exact(&rat(1, 1)).unwrap(), rat(0, 1));
        assert!(b0_exact(&rat(0, 1)).is_err());
    }

    #[test]
    fn c_values() {
        assert_eq!(c1(&cone(1.0, 0.0)), 0.0);
        assert!((c1(&cone(1.0, 1.0)) + 1.0 / 60.0).abs() < 1e-16);
        assert!((c1(&cone(2.0, -1.0)) + 1.0 / 120.0).abs() < 1e-16);
        assert_eq!(c2m(&cone(1.0, 0.0), 3).unwrap(), 0.0);
        assert!((c2m(&cone(1.0, 1.0), 2).unwrap() - 1.0 / 15.0).abs() < 1e-16);
        assert!(c2m(&cone(1.0, 1.0), 1).is_err());
    }

    #[test]
    fn heat_from_resolvent_cases() {
        let (b, c) = heat_from_resolvent(0, 5, 0.37, 0.0).unwrap();
        assert!((b - 0.37).abs() < 1e-15);
        assert_eq!(c, 0.0);
        for m in 2..=4 {
            let k = 1.7;
            let (_, c) = heat_from_resolvent(2, m, 0.0, m as f64 / 30.0 * k).unwrap();
            assert!((c + k / 60.0).abs() < 1e-15);
        }
        let (_, c) = heat_from_resolvent(3, 2, 0.9, 0.0).unwrap();
        assert_eq!(c, 0.0);
        assert!(heat_from_resolvent(1, 1, 1.0, 0.0).is_err());
    }

    #[test]
    fn psi_m_values() {
        let want = 3.0 * PI.sqrt() / 2.0;
        assert!((psi_m(2, 0.0).unwrap() - want).abs() < 1e-14);
        let want3 = 2.0 * (15.0 * PI.sqrt() / 8.0);
        assert!((psi_m(3, 0.0).unwrap() - want3).abs() < 1e-13);
        for s in [1e-4, -1e-4] {
            let v = psi_m(2, s).unwrap();
            assert!((v / want - 1.0).abs() < 1e-3);
        }
        // s = 2: Γ(1-s/2) and Γ(1-s) both have poles
        let v = psi_m(2, 2.0).unwrap();
        let near = psi_m(2, 2.0 + 1e-7).unwrap();
        assert!((v - near).abs() < 1e-5 * v.abs());
        // genuine pole: m + 1/2 + s/2 = 0
        assert!(psi_m(2, -5.0).is_err());
        assert!(psi_m(1, 0.0).is_err());
    }

    #[test]
    fn i_j_closed_values() {
        assert_eq!(i_j_closed_coefficient(1).unwrap(), rat(-1, 4));
        assert_eq!(i_j_closed_coefficient(3).unwrap(), rat(-1, 2));
        assert_eq!(i_j_closed_coefficient(5).unwrap(), rat(-4, 1));
        assert!((i_j_closed::<f64>(1).unwrap() + PI * PI / 4.0).abs() < 1e-15);
        assert!(i_j_closed::<f64>(2).is_err());
    }

    #[test]
    fn i_j_quadrature_even() {
        let i1 = i_j_quad::<f64>(1, 1e-12).unwrap().value;
        let i2 = i_j_quad::<f64>(2, 1e-12).unwrap().value;
        let i3 = i_j_quad::<f64>(3, 1e-12).unwrap().value;
        // even powers of the logarithm make I_2 positive
        assert!(i2 > 0.0);
        assert!(i1.abs() < i2.abs() && i2.abs() < i3.abs());
        // mpmath reference
        assert!((i2 - 8.414_398_322_117_16).abs() < 1e-12);
        assert!(i_j_quad::<f64>(0, 1e-12).is_err());
    }

    #[test]
    fn v1_closed_value() {
        let v1 = v_j_high_precision(1).unwrap();
        let want = PI.powi(2) / 16.0 - PI.powi(4) / 192.0;
        assert!((v1 - want).abs() < 1e-15 * want.abs());
        assert!((v1 - 0.109_511_259_265_988_9).abs() < 1e-15);
        let c = taylor_coefficient(1).unwrap();
        assert!((c - v1 * (-1.0 / 30.0)).abs() < 1e-17);
        assert!((c + 3.650_375_308_866_297e-3).abs() < 1e-17);
        assert_eq!(taylor_coefficient(2).unwrap(), 0.0);
    }

    #[test]
    fn taylor_coefficient_matches_literal_formula() {
        // the direct double-precision formula is fine while cancellation is mild
        for j in [1u32, 3, 5] {
            let ij: f64 = i_j_closed(j).unwrap();
            let ij2: f64 = i_j_closed(j + 2).unwrap();
            let jf = (1..=j).map(|k| k as f64).product::<f64>();
            let j3f = (1..=j + 3).map(|k| k as f64).product::<f64>();
            let b = shared_bernoulli().get_f64(j as usize + 3).unwrap();
            let literal = -(ij / (jf * (j as f64 + 3.0)) - ij2 / (4.0 * j3f)) * b;
            let got = taylor_coefficient(j).unwrap();
            assert!((literal - got).abs() <= 1e-12 * got.abs(), "j = {j}");
        }
    }

    #[test]
    fn big_f_at_one_vanishes() {
        let r = big_f(1.0, 1e-10).unwrap();
        assert!(r.converged);
        assert!(r.value.abs() <= 1e-10);
    }

    #[test]
    fn big_f_domain() {
        assert!(big_f(0.0, 1e-10).is_err());
        assert!(big_f(1.0, 0.0).is_err());
    }

    #[test]
    fn b_half_zero_cases() {
        let r = b_half(&cone(0.5, 0.0), 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        let r = b_half(&cone(1.0, 0.7), 1e-10).unwrap();
        assert!(r.value.abs() < 1e-10);
    }

    #[test]
    fn h_alpha_at_domain() {
        assert!(h_alpha_at(2.0, 1.0, 1e-8).is_err());
        assert!(h_alpha_at(2.0, -1.0, 1e-8).is_err());
        assert!(h_alpha_at(0.0, 0.0, 1e-8).is_err());
        let r = h_alpha_at(1.0, 0.4, 1e-8).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn asymptotic_order_validation() {
        assert!(asymptotic_f(0.1_f64, 0).is_err());
        assert!(asymptotic_terms(0, 1e-10).is_err());
    }

    #[test]
    fn asymptotic_at_zero_is_constant() {
        let c0 = asymptotic_constant().unwrap();
        assert_eq!(asymptotic_f(0.0_f64, 1).unwrap(), c0);
    }
}
