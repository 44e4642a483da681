//! Growth of the Taylor coefficients `V_j B_{j+3}` of `F` at `α = 0`.
//!
//! `V_j` is bounded below by
//!
//! ```text
//! 2^{j-1} π^{j+3} |B_{j+3}| / ((j+3)! (j+3)) · (7/9) · (2^{j+3} - 1)/(3^{j+1} - 1)
//! ```
//!
//! and the `(j+3)`-th roots of `|V_j B_{j+3}|` grow without bound, so the
//! series has radius zero.

use crate::coefficients::{i_j_closed, taylor_coefficient, v_j_high_precision};
use crate::error::{Error, Result};
use crate::special_fn::{log_gamma, shared_bernoulli};

/// Largest supported `j`.
pub const J_MAX: u32 = 41;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorDiagRow {
    pub j: u32,
    pub i_j: f64,
    pub i_j2: f64,
    pub v_j: f64,
    pub d_j: f64,
    pub lower_bound: f64,
    /// `V_j B_{j+3}`.
    pub taylor_coeff: f64,
    /// `|V_j B_{j+3}|^{1/(j+3)}`.
    pub root: f64,
    /// `|V_j|^{1/(j+3)}`.
    pub v_root: f64,
}

fn check_odd(op: &'static str, j: u32) -> Result<()> {
    if j % 2 == 1 && j <= J_MAX {
        Ok(())
    } else {
        Err(Error::domain(op, format!("j = {j} must be odd and at most {J_MAX}")))
    }
}

/// `V_j = -(I_j/(j!(j+3)) - I_{j+2}/(4 (j+3)!))`.
pub fn v_j(j: u32) -> Result<f64> {
    check_odd("v_j", j)?;
    v_j_high_precision(j)
}

/// `D_j = (j+2)(j+3)/π² · |B_{j+1}| / |B_{j+3}|`.
pub fn d_j(j: u32) -> Result<f64> {
    check_odd("d_j", j)?;
    let t = shared_bernoulli();
    let ju = j as usize;
    let ratio = (t.get_f64(ju + 1)? / t.get_f64(ju + 3)?).abs();
    let jf = j as f64;
    Ok((jf + 2.0) * (jf + 3.0) / (std::f64::consts::PI.powi(2)) * ratio)
}

/// The lower bound on `V_j`, evaluated in logarithms.
pub fn lower_bound(j: u32) -> Result<f64> {
    check_odd("lower_bound", j)?;
    let jf = j as f64;
    let b = shared_bernoulli().get_f64(j as usize + 3)?.abs();
    let ln = (jf - 1.0) * std::f64::consts::LN_2 + (jf + 3.0) * std::f64::consts::PI.ln()
        + b.ln()
        - log_gamma(jf + 4.0)?
        - (jf + 3.0).ln()
        + (7.0_f64 / 9.0).ln()
        + (2.0_f64.powf(jf + 3.0) - 1.0).ln()
        - (3.0_f64.powf(jf + 1.0) - 1.0).ln();
    Ok(ln.exp())
}

/// Diagnostic row for one odd `j`.
pub fn row(j: u32) -> Result<TaylorDiagRow> {
    let v = v_j(j)?;
    let taylor_coeff = taylor_coefficient(j)?;
    let e = 1.0 / (j as f64 + 3.0);
    Ok(TaylorDiagRow {
        j,
        i_j: i_j_closed(j)?,
        i_j2: i_j_closed(j + 2)?,
        v_j: v,
        d_j: d_j(j)?,
        lower_bound: lower_bound(j)?,
        taylor_coeff,
        root: (taylor_coeff.abs().ln() * e).exp(),
        v_root: (v.abs().ln() * e).exp(),
    })
}

/// Rows for `j = 1, 3, ..., j_max`.
pub fn report(j_max: u32) -> Result<Vec<TaylorDiagRow>> {
    check_odd("report", j_max)?;
    (1..=j_max).step_by(2).map(row).collect()
}
