//! The series family `h_{k,α}(z) = Σ_n α^k n^k (1-z)^{nα}` on `z ∈ [0, 1]`,
//! its pole part at `z = 0`, the regularised difference quotient `ĥ_{k,α}`,
//! and the Bernoulli power series `P_α^{(k)}` together with `Φ_k`, `Φ̂_k`.
//!
//! Two independent evaluation routes are provided for `ĥ_{k,α}`:
//!
//! * **direct**: closed forms of `h_{k,α}` (obtained by applying
//!   `w d/dw`, `w = 1 - z`, to the geometric series) minus the pole part and
//!   the regular value at 0, divided by `z`;
//! * **series**: the Bernoulli expansion in `L = log(1 - z)`, which is free
//!   of cancellation near `z = 0`.
//!
//! [`h_hat`] picks the series route inside the window `|L| <= min(1, π/α)`,
//! where `|αL| <= π` keeps the term ratio near 1/4.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{two_sum, CompensatedSum, Real};
use crate::special_fn::{rational_to_f64, shared_bernoulli, SHARED_CAPACITY};

/// Term cap for the Bernoulli power series.
pub const SERIES_TERM_CAP: usize = 200;

/// Term cap for the brute-force oracle.
pub const ORACLE_TERM_CAP: usize = 1_000_000;

/// Largest `k` with closed forms.
pub const MAX_CLOSED_FORM_K: usize = 2;

/// Direct evaluation below this `z` is reported as precision-losing.
pub const PRECISION_LOSS_Z: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HMethod {
    Direct,
    Series,
    Oracle,
    Endpoint,
}

impl HMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HMethod::Direct => "direct",
            HMethod::Series => "series",
            HMethod::Oracle => "oracle",
            HMethod::Endpoint => "endpoint",
        }
    }
}

/// Caller's choice of route for [`h_hat_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Direct,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEval<T> {
    pub value: T,
    pub method: HMethod,
    pub terms_used: usize,
    pub err_est: T,
    /// Term cap reached before the tolerance was met.
    pub truncated: bool,
    /// Direct route forced at small `z`; `err_est` carries the amplification.
    pub precision_loss: bool,
}

impl<T: Real> HEval<T> {
    fn exact(value: T, method: HMethod) -> Self {
        Self {
            value,
            method,
            terms_used: 0,
            err_est: T::zero(),
            truncated: false,
            precision_loss: false,
        }
    }
}

/// Validated `(k, α)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HParams<T> {
    pub k: usize,
    pub alpha: T,
}

impl<T: Real> HParams<T> {
    pub fn new(k: usize, alpha: T) -> Result<Self> {
        check_alpha("HParams", alpha)?;
        Ok(Self { k, alpha })
    }

    pub fn has_closed_form(&self) -> bool {
        self.k <= MAX_CLOSED_FORM_K
    }
}

/// Radii and the route switch point for a given `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDomain<T> {
    pub alpha: T,
    /// Radius of the disc around 0 on which the regular part is holomorphic.
    pub r_alpha: T,
    /// Convergence radius `2π/α` of `P_α`.
    pub series_radius: T,
    /// `h_hat` uses the series route for `z <= z_switch`.
    pub z_switch: T,
}

impl<T: Real> EvalDomain<T> {
    pub fn new(alpha: T) -> Result<Self> {
        check_alpha("EvalDomain", alpha)?;
        let pi = T::PI();
        let r_alpha = if alpha < T::lit(6.0) {
            T::one()
        } else {
            T::lit(2.0) * (pi / alpha).sin().abs()
        };
        let window = series_window(alpha);
        Ok(Self {
            alpha,
            r_alpha,
            series_radius: T::lit(2.0) * pi / alpha,
            z_switch: -(-window).exp_m1(),
        })
    }
}

/// Half-width of the series window in `L = log(1-z)`: `min(1, π/α)`.
pub fn series_window<T: Real>(alpha: T) -> T {
    (T::PI() / alpha).min(T::one())
}

fn check_alpha<T: Real>(op: &'static str, alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("alpha = {alpha} must be positive")))
    }
}

fn check_open_unit<T: Real>(op: &'static str, z: T) -> Result<()> {
    if z > T::zero() && z < T::one() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("z = {z} not in (0, 1)")))
    }
}

fn check_closed_form_k(op: &'static str, k: usize) -> Result<()> {
    if k <= MAX_CLOSED_FORM_K {
        Ok(())
    } else {
        Err(Error::domain(op, format!("closed form only for k <= 2, got k = {k}")))
    }
}

/// `c_{k,j} = B_{j+k+1} / (j! (j+k+1))`, the coefficients of `P^{(k)}` at α = 1.
fn coefficients_exact(k: usize) -> Vec<f64> {
    let table = shared_bernoulli();
    let mut out = Vec::new();
    let mut fact = BigRational::from_integer(1.into());
    let mut j = 0usize;
    while j + k < SHARED_CAPACITY {
        if j > 0 {
            fact *= BigRational::from_integer(j.into());
        }
        let b = table.get(j + k + 1).expect("within capacity");
        let c = if b.is_zero() {
            0.0
        } else {
            let denom = &fact * BigRational::from_integer((j + k + 1).into());
            rational_to_f64(&(b / denom))
        };
        out.push(c);
        j += 1;
    }
    out
}

/// Coefficients of `P^{(k)}_1`, cached for `k <= 3`.
pub fn series_coefficients(k: usize) -> std::borrow::Cow<'static, [f64]> {
    static CACHE: [OnceLock<Vec<f64>>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    match CACHE.get(k) {
        Some(cell) => std::borrow::Cow::Borrowed(cell.get_or_init(|| coefficients_exact(k))),
        None => std::borrow::Cow::Owned(coefficients_exact(k)),
    }
}

/// Evaluation point carried as `z`, `w = 1 - z` and `L = log(1 - z)`.
///
/// Integrands over `u` with `z = 1 - u^2` build the point from `u`
/// directly, so `w` and `L` keep full relative accuracy as `u -> 0`.
#[derive(Debug, Clone, Copy)]
struct Point<T> {
    z: T,
    w: T,
    l: T,
}

impl<T: Real> Point<T> {
    fn from_z(z: T) -> Self {
        Self {
            z,
            w: T::one() - z,
            l: (-z).ln_1p(),
        }
    }

    fn from_u(u: T) -> Self {
        Self {
            z: (T::one() - u) * (T::one() + u),
            w: u * u,
            l: T::lit(2.0) * u.ln(),
        }
    }

    /// `L / z`, with the removable value `-1` at `z = 0`.
    fn l_over_z(&self) -> T {
        if self.z == T::zero() {
            -T::one()
        } else {
            self.l / self.z
        }
    }
}

/// Closed-form `h_{k,α}(z)` for `k <= 2`, `z ∈ (0, 1)`.
pub fn h_direct<T: Real>(k: usize, alpha: T, z: T) -> Result<T> {
    check_closed_form_k("h_direct", k)?;
    check_alpha("h_direct", alpha)?;
    check_open_unit("h_direct", z)?;
    Ok(h_closed(k, alpha, &Point::from_z(z)))
}

// also valid at z = 1 (q = 0)
fn h_closed<T: Real>(k: usize, alpha: T, p: &Point<T>) -> T {
    let log_q = alpha * p.l;
    let q = log_q.exp();
    let one_minus_q = -log_q.exp_m1();
    match k {
        0 => one_minus_q.recip(),
        1 => alpha * q / (one_minus_q * one_minus_q),
        _ => alpha * alpha * q * (T::one() + q) / (one_minus_q * one_minus_q * one_minus_q),
    }
}

/// Pole part `(1/α) h_{k,1}(z)`.
pub fn h_sing<T: Real>(k: usize, alpha: T, z: T) -> Result<T> {
    check_closed_form_k("h_sing", k)?;
    check_alpha("h_sing", alpha)?;
    check_open_unit("h_sing", z)?;
    Ok(h_sing_closed(k, alpha, &Point::from_z(z)))
}

fn h_sing_closed<T: Real>(k: usize, alpha: T, p: &Point<T>) -> T {
    let (z, w) = (p.z, p.w);
    let v = match k {
        0 => z.recip(),
        1 => w / (z * z),
        _ => w * (T::one() + w) / (z * z * z),
    };
    v / alpha
}

/// `h^reg_{k,α}(0) = B_{k+1} (1 - α^{k+1}) / (α (k+1))`.
pub fn h_reg_at_zero<T: Real>(k: usize, alpha: T) -> Result<T> {
    check_alpha("h_reg_at_zero", alpha)?;
    let b: T = shared_bernoulli().get_real(k + 1)?;
    if b == T::zero() {
        return Ok(T::zero());
    }
    let m = T::from_usize_lossy(k + 1);
    let factor = -(m * alpha.ln()).exp_m1();
    Ok(b * factor / (alpha * m))
}

/// Brute-force partial sum of the defining series, independent of the
/// closed forms. Stops once a geometric tail bound drops below
/// `tol * |partial|`.
pub fn h_oracle<T: Real>(k: usize, alpha: T, z: T, tol: T) -> Result<HEval<T>> {
    check_alpha("h_oracle", alpha)?;
    check_open_unit("h_oracle", z)?;
    let log_q = alpha * (-z).ln_1p();
    let q = log_q.exp();
    let kk = k as i32;
    let mut acc = CompensatedSum::new();
    let mut q_pow = T::one();
    let mut n = 0usize;
    let mut bound = T::infinity();
    while n < ORACLE_TERM_CAP {
        let nf = T::from_usize_lossy(n);
        let term = if k == 0 { q_pow } else { nf.powi(kk) * q_pow };
        acc.add(term);
        q_pow = q_pow * q;
        n += 1;
        // next term and ratio bound for everything after it
        let nf1 = T::from_usize_lossy(n);
        let next = nf1.powi(kk) * q_pow;
        let ratio = if n == 0 {
            T::infinity()
        } else {
            ((nf1 + T::one()) / nf1).powi(kk) * q
        };
        if ratio < T::one() {
            bound = next / (T::one() - ratio);
            let partial = acc.value().abs();
            if bound < tol * partial || bound == T::zero() {
                acc.add(next);
                n += 1;
                break;
            }
        }
    }
    let scale = alpha.powi(kk);
    let truncated = n >= ORACLE_TERM_CAP;
    Ok(HEval {
        value: acc.value() * scale,
        method: HMethod::Oracle,
        terms_used: n,
        err_est: if bound.is_finite() { bound * scale } else { T::infinity() },
        truncated,
        precision_loss: false,
    })
}

/// `P_α^{(k)}(L) = Σ_j B_{j+k+1} α^{j+k+1} L^j / (j! (j+k+1))` for `|L| < 2π/α`.
pub fn p_series<T: Real>(k: usize, alpha: T, l: T, tol: T) -> Result<HEval<T>> {
    check_alpha("p_series", alpha)?;
    let radius = T::lit(2.0) * T::PI() / alpha;
    if !(l.abs() < radius) {
        return Err(Error::domain(
            "p_series",
            format!("|L| = {} outside the convergence radius {radius}", l.abs()),
        ));
    }
    let coeffs = series_coefficients(k);
    let al = alpha * l;
    let mut pow = alpha.powi(k as i32 + 1);
    let mut acc = CompensatedSum::new();
    let mut last = T::zero();
    let mut used = 0usize;
    let mut done = false;
    for (j, &c) in coeffs.iter().enumerate().take(SERIES_TERM_CAP) {
        if j > 0 {
            pow = pow * al;
        }
        used = j + 1;
        if c == 0.0 {
            continue;
        }
        let term = T::lit(c) * pow;
        if !term.is_finite() {
            break;
        }
        acc.add(term);
        last = term.abs();
        if j > 0 && last < tol * acc.value().abs().max(T::one()) {
            done = true;
            break;
        }
    }
    Ok(HEval {
        value: acc.value(),
        method: HMethod::Series,
        terms_used: used,
        err_est: last,
        truncated: !done && !(l == T::zero()),
        precision_loss: false,
    })
}

/// `Φ_k(0) = -B_{k+1}/(k+1)`.
pub fn phi_at_zero<T: Real>(k: usize) -> Result<T> {
    let b: T = shared_bernoulli().get_real(k + 1)?;
    Ok(-b / T::from_usize_lossy(k + 1))
}

/// Switch point of [`phi`]: the series route is used while `|log(1-z)| <= 1`.
pub fn phi_switch<T: Real>() -> T {
    -(-T::one()).exp_m1()
}

/// `Φ_k(z) = (-(1-z) d/dz)^k (1/z + 1/log(1-z))` on `[0, 1)`.
pub fn phi<T: Real>(k: usize, z: T) -> Result<T> {
    if !(z >= T::zero() && z < T::one()) {
        return Err(Error::domain("phi", format!("z = {z} not in [0, 1)")));
    }
    if z == T::zero() {
        return phi_at_zero(k);
    }
    if z >= phi_switch() {
        check_closed_form_k("phi", k)?;
        return Ok(phi_closed(k, &Point::from_z(z)));
    }
    phi_series(k, z)
}

fn phi_closed<T: Real>(k: usize, p: &Point<T>) -> T {
    let (z, w, l) = (p.z, p.w, p.l);
    match k {
        0 => z.recip() + l.recip(),
        1 => w / (z * z) - (l * l).recip(),
        _ => w * (T::one() + w) / (z * z * z) + T::lit(2.0) / (l * l * l),
    }
}

/// `Φ_k(z) = -P_1^{(k)}(log(1-z))`.
fn phi_series<T: Real>(k: usize, z: T) -> Result<T> {
    let l = (-z).ln_1p();
    let p = p_series(k, T::one(), l, T::epsilon() * T::lit(0.25))?;
    Ok(-p.value)
}

/// Series for `Φ̂_k(z)`: `-(L/z) Σ_{j>=1} c_{k,j} L^{j-1}`.
fn phi_hat_series<T: Real>(k: usize, p: &Point<T>) -> T {
    let coeffs = series_coefficients(k);
    let l = p.l;
    let lz = p.l_over_z();
    let tol = T::epsilon() * T::lit(0.25);
    let mut acc = CompensatedSum::new();
    let mut pow = T::one();
    for (j, &c) in coeffs.iter().enumerate().skip(1).take(SERIES_TERM_CAP) {
        if j > 1 {
            pow = pow * l;
        }
        if c == 0.0 {
            continue;
        }
        let term = T::lit(c) * pow;
        acc.add(term);
        if j > 1 && term.abs() < tol * acc.value().abs().max(T::min_positive_value()) {
            break;
        }
    }
    -lz * acc.value()
}

/// `Φ̂_k(z) = (Φ_k(z) - Φ_k(0)) / z` on `[0, 1]`, continuous at both ends.
pub fn phi_hat<T: Real>(k: usize, z: T) -> Result<T> {
    if !(z >= T::zero() && z <= T::one()) {
        return Err(Error::domain("phi_hat", format!("z = {z} not in [0, 1]")));
    }
    if z == T::one() {
        return phi_hat_at_one(k);
    }
    phi_hat_point(k, &Point::from_z(z))
}

/// `Φ̂_k(1 - u^2)` for `u ∈ [0, 1]`, evaluated without forming `1 - u^2`
/// inside the logarithm.
pub fn phi_hat_sq<T: Real>(k: usize, u: T) -> Result<T> {
    if !(u >= T::zero() && u <= T::one()) {
        return Err(Error::domain("phi_hat", format!("u = {u} not in [0, 1]")));
    }
    if u == T::zero() {
        return phi_hat_at_one(k);
    }
    phi_hat_point(k, &Point::from_u(u))
}

fn phi_hat_at_one<T: Real>(k: usize) -> Result<T> {
    let at_zero: T = phi_at_zero(k)?;
    let at_one = if k == 0 { T::one() } else { T::zero() };
    Ok(at_one - at_zero)
}

fn phi_hat_point<T: Real>(k: usize, p: &Point<T>) -> Result<T> {
    if p.l.abs() <= T::one() {
        return Ok(phi_hat_series(k, p));
    }
    check_closed_form_k("phi_hat", k)?;
    let at_zero: T = phi_at_zero(k)?;
    Ok((phi_closed(k, p) - at_zero) / p.z)
}

/// `ĥ_{k,α}(z)` on `[0, 1]`, route chosen automatically.
pub fn h_hat<T: Real>(k: usize, alpha: T, z: T, tol: T) -> Result<HEval<T>> {
    h_hat_with(k, alpha, z, tol, MethodChoice::Auto)
}

/// `ĥ_{k,α}(z)` with an explicit route.
///
/// The series route is only valid while `|α log(1-z)| < 2π`.
pub fn h_hat_with<T: Real>(
    k: usize,
    alpha: T,
    z: T,
    tol: T,
    choice: MethodChoice,
) -> Result<HEval<T>> {
    check_alpha("h_hat", alpha)?;
    check_closed_form_k("h_hat", k)?;
    if !(z >= T::zero() && z <= T::one()) {
        return Err(Error::domain("h_hat", format!("z = {z} not in [0, 1]")));
    }
    if z == T::one() {
        return Ok(HEval::exact(h_hat_at_one(k, alpha)?, HMethod::Endpoint));
    }
    if z == T::zero() {
        let mut e = h_hat_series(k, alpha, &Point::from_z(z), tol)?;
        e.method = HMethod::Endpoint;
        return Ok(e);
    }
    h_hat_point(k, alpha, &Point::from_z(z), tol, choice)
}

/// `ĥ_{k,α}(1 - u^2)` for `u ∈ [0, 1]`, evaluated from `u` so that
/// `(1-z)^α = u^{2α}` and `log(1-z) = 2 log u` stay accurate near `u = 0`.
pub fn h_hat_sq<T: Real>(k: usize, alpha: T, u: T, tol: T) -> Result<HEval<T>> {
    check_alpha("h_hat", alpha)?;
    check_closed_form_k("h_hat", k)?;
    if !(u >= T::zero() && u <= T::one()) {
        return Err(Error::domain("h_hat", format!("u = {u} not in [0, 1]")));
    }
    if u == T::zero() {
        return Ok(HEval::exact(h_hat_at_one(k, alpha)?, HMethod::Endpoint));
    }
    if u == T::one() {
        let mut e = h_hat_series(k, alpha, &Point::from_z(T::zero()), tol)?;
        e.method = HMethod::Endpoint;
        return Ok(e);
    }
    h_hat_point(k, alpha, &Point::from_u(u), tol, MethodChoice::Auto)
}

fn h_hat_point<T: Real>(
    k: usize,
    alpha: T,
    p: &Point<T>,
    tol: T,
    choice: MethodChoice,
) -> Result<HEval<T>> {
    let use_series = match choice {
        MethodChoice::Series => true,
        MethodChoice::Direct => false,
        MethodChoice::Auto => p.l.abs() <= series_window(alpha),
    };
    if use_series {
        h_hat_series(k, alpha, p, tol)
    } else {
        h_hat_direct(k, alpha, p, choice == MethodChoice::Direct)
    }
}

/// Continuous extension at `z = 1`: `h_{k,α}(1) - h^sing(1) - h^reg(0)`.
fn h_hat_at_one<T: Real>(k: usize, alpha: T) -> Result<T> {
    let reg0 = h_reg_at_zero(k, alpha)?;
    let (h1, sing1) = if k == 0 {
        (T::one(), alpha.recip())
    } else {
        (T::zero(), T::zero())
    };
    Ok(h1 - sing1 - reg0)
}

/// `(1/α)(L/z) Σ_{j>=1} c_{k,j} (1 - α^{j+k+1}) L^{j-1}`.
fn h_hat_series<T: Real>(k: usize, alpha: T, p: &Point<T>, tol: T) -> Result<HEval<T>> {
    let l = p.l;
    let radius = T::lit(2.0) * T::PI();
    if !((alpha * l).abs() < radius) {
        return Err(Error::domain(
            "h_hat",
            format!("series route outside its radius at z = {}, alpha = {alpha}", p.z),
        ));
    }
    let coeffs = series_coefficients(k);
    let lz = p.l_over_z();
    let ln_alpha = alpha.ln();
    let near_one = ln_alpha.abs() < T::lit(0.5);
    let al = alpha * l;
    let mut pl = T::one(); // L^{j-1}
    let mut pa = alpha.powi(k as i32 + 2); // α^{k+2} (αL)^{j-1}
    let mut acc = CompensatedSum::new();
    let mut last = T::zero();
    let mut used = 0usize;
    let mut done = false;
    for (j, &c) in coeffs.iter().enumerate().skip(1).take(SERIES_TERM_CAP) {
        if j > 1 {
            pl = pl * l;
            pa = pa * al;
        }
        used = j;
        if c == 0.0 {
            continue;
        }
        let cc = T::lit(c);
        let term = if near_one {
            let m = T::from_usize_lossy(j + k + 1);
            -cc * pl * (m * ln_alpha).exp_m1()
        } else {
            cc * (pl - pa)
        };
        if !term.is_finite() {
            break;
        }
        acc.add(term);
        last = term.abs();
        let scale = acc.value().abs().max(T::min_positive_value());
        if j > 1 && (last < tol * scale || last == T::zero()) {
            done = true;
            break;
        }
    }
    let factor = lz / alpha;
    let value = factor * acc.value();
    let err_est = (factor * last).abs() + T::epsilon() * value.abs();
    Ok(HEval {
        value,
        method: HMethod::Series,
        terms_used: used,
        err_est,
        truncated: !done,
        precision_loss: false,
    })
}

/// `(h - h^sing - h^reg(0)) / z`, combined with compensated subtraction.
fn h_hat_direct<T: Real>(k: usize, alpha: T, p: &Point<T>, forced: bool) -> Result<HEval<T>> {
    let z = p.z;
    let h = h_closed(k, alpha, p);
    let hs = h_sing_closed(k, alpha, p);
    let r0 = h_reg_at_zero(k, alpha)?;
    let (s1, e1) = two_sum(h, -hs);
    let (s2, e2) = two_sum(s1, -r0);
    let diff = s2 + (e1 + e2);
    let value = diff / z;
    // each closed form carries a few ulps; they are amplified by 1/z
    let magnitude = h.abs() + hs.abs() + r0.abs();
    let err_est = T::lit(4.0) * T::epsilon() * magnitude / z;
    Ok(HEval {
        value,
        method: HMethod::Direct,
        terms_used: 0,
        err_est,
        truncated: false,
        precision_loss: forced && z < T::lit(PRECISION_LOSS_Z),
    })
}
