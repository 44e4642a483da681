//! Adaptive Gauss–Kronrod 7/15 quadrature with an optional double-exponential
//! (tanh-sinh) change of variables for endpoint singularities.
//!
//! Panels are refined worst-first; the final value is a compensated sum over
//! panels in position order, so results are reproducible bit-for-bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Panel cap for adaptive refinement.
pub const MAX_PANELS: usize = 1 << 14;

/// Initial panel count in the transformed variable.
const DE_INITIAL_PANELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    /// Absolute error estimate.
    pub err_est: T,
    pub n_evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    /// Convergence target: `err_est <= tol * max(1, |value|)`.
    pub tol: T,
    pub max_panels: usize,
    /// Integrate in the tanh-sinh variable; use for log or algebraic
    /// endpoint behaviour.
    pub endpoint_singular: bool,
}

impl<T: Real> QuadOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            max_panels: MAX_PANELS,
            endpoint_singular: false,
        }
    }

    pub fn singular(mut self) -> Self {
        self.endpoint_singular = true;
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    err: T,
    id: usize,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    // max-heap on error; ties go to the older panel
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, error estimate).
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let centr = half * (a + b);
    let hlgth = half * (b - a);
    let fc = f(centr);
    check_finite(fc, centr)?;
    let mut resg = fc * T::lit(WG[3]);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = hlgth * T::lit(XGK[j]);
        let (x1, x2) = (centr - dx, centr + dx);
        let f1 = f(x1);
        check_finite(f1, x1)?;
        let f2 = f(x2);
        check_finite(f2, x2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        resk = resk + wk * (f1 + f2);
        resabs = resabs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * half;
    let mut resasc = T::lit(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc = resasc + T::lit(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let mut err = ((resk - resg) * hlgth).abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * scale.min(T::one());
    }
    let round_floor = T::lit(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(round_floor);
    }
    Ok((result, err))
}

fn check_finite<T: Real>(y: T, x: T) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "integrate",
            format!("integrand is not finite at x = {x}"),
        ))
    }
}

fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    breaks: &[T],
    opts: &QuadOptions<T>,
) -> Result<QuadResult<T>> {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<T>> = Vec::new();
    let mut next_id = 0usize;
    let mut n_evals = 0usize;
    let mut total_value = T::zero();
    let mut total_err = T::zero();
    for w in breaks.windows(2) {
        let (value, err) = gk15(f, w[0], w[1])?;
        n_evals += 15;
        total_value = total_value + value;
        total_err = total_err + err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
            id: next_id,
        });
        next_id += 1;
    }
    let target = |v: T| opts.tol * v.abs().max(T::one());
    let min_width = T::lit(100.0) * T::epsilon();

    while total_err > target(total_value) && heap.len() + frozen.len() < opts.max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = T::lit(0.5) * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(T::min_positive_value());
        if (worst.b - worst.a) <= min_width * scale || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid)?;
        let (v2, e2) = gk15(f, mid, worst.b)?;
        n_evals += 30;
        total_value = total_value - worst.value + v1 + v2;
        total_err = total_err - worst.err + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
            id: next_id,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
            id: next_id + 1,
        });
        next_id += 2;
    }

    let mut panels: Vec<Panel<T>> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut value = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    for p in &panels {
        value.add(p.value);
        err.add(p.err);
    }
    let value = value.value();
    let err_est = err.value();
    Ok(QuadResult {
        value,
        err_est,
        n_evals,
        converged: err_est <= target(value),
    })
}

/// Integrates `f` over `[a, b]` to `err_est <= tol * max(1, |value|)`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<QuadResult<T>> {
    integrate_with(f, a, b, &QuadOptions::new(tol))
}

/// Same as [`integrate`], in the tanh-sinh variable.
pub fn integrate_singular<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    tol: T,
) -> Result<QuadResult<T>> {
    integrate_with(f, a, b, &QuadOptions::new(tol).singular())
}

pub fn integrate_with<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    opts: &QuadOptions<T>,
) -> Result<QuadResult<T>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "integrate",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::domain("integrate", "tolerance must be positive"));
    }
    if !opts.endpoint_singular {
        return adaptive(&f, &[a, b], opts);
    }
    let map = TanhSinh::new(a, b);
    let g = |t: T| map.weighted(&f, t);
    let t_max = map.t_max;
    let n = DE_INITIAL_PANELS;
    let breaks: Vec<T> = (0..=n)
        .map(|i| -t_max + T::lit(2.0) * t_max * T::from_usize_lossy(i) / T::from_usize_lossy(n))
        .collect();
    adaptive(&g, &breaks, opts)
}

/// x(t) = (a+b)/2 + (b-a)/2 tanh(π/2 sinh t).
struct TanhSinh<T> {
    a: T,
    b: T,
    t_max: T,
}

impl<T: Real> TanhSinh<T> {
    fn new(a: T, b: T) -> Self {
        // keep the endpoint distance above sqrt(min_positive)
        let s_max = -T::min_positive_value().ln() / T::lit(4.0);
        let t_max = (T::lit(2.0) * s_max / T::PI()).asinh();
        Self { a, b, t_max }
    }

    fn weighted<F: Fn(T) -> T>(&self, f: &F, t: T) -> T {
        let half_pi = T::FRAC_PI_2();
        let s = half_pi * t.sinh();
        let e = (-T::lit(2.0) * s.abs()).exp();
        let len = self.b - self.a;
        // distance to the nearer endpoint, without cancellation
        let d = len * e / (T::one() + e);
        let x = if s < T::zero() { self.a + d } else { self.b - d };
        if x <= self.a || x >= self.b {
            return T::zero();
        }
        let sech2 = T::lit(4.0) * e / ((T::one() + e) * (T::one() + e));
        let w = len * T::lit(0.5) * half_pi * t.cosh() * sech2;
        if w == T::zero() {
            return T::zero();
        }
        f(x) * w
    }
}
