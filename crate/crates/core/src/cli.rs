//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::coefficients::{
    asymptotic_f, b0, big_f, c1, c2m, heat_coefficients, resolvent_coefficients, ConeData,
    Provenance,
};
use crate::error::{Error, Result};
use crate::geometry::{
    curvature_class, embedding, from_derivatives, from_profile_samples, read_profile_csv,
};
use crate::hfun::{h_direct, h_hat_with, h_oracle, h_reg_at_zero, h_sing, MethodChoice};
use crate::irrationality::report;
use crate::output::{Cell, OutputRecord, Table, FIT};

pub const DEFAULT_TOL: f64 = 1e-10;

const CLOSED: &str = "closed_form";

#[derive(Debug, Parser)]
#[command(name = "conetrace", version, about = "Heat-trace coefficients of curved cone points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HMethodArg {
    Auto,
    Direct,
    Series,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heat and resolvent coefficients of a cone germ.
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        fprime0: f64,
        #[arg(long, allow_negative_numbers = true)]
        fsecond0: f64,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate F(alpha) over an interval.
    Scan {
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare F with its small-alpha expansion.
    Asymptotics {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Growth diagnostics of the Taylor coefficients of F.
    Irrationality {
        #[arg(long, default_value_t = 41)]
        jmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fit a cone germ to a sampled profile and report its coefficients.
    Profile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate h, its singular and regular parts, and h-hat at one point.
    Hfun {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, value_enum, default_value_t = HMethodArg::Auto)]
        method: HMethodArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn usage(detail: impl Into<String>) -> Error {
    Error::Validation(detail.into())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("tolerance {tol} must be positive")))
    }
}

fn non_converged(op: &'static str, value: f64, err: f64, tol: f64) -> Error {
    Error::NonConvergence {
        op,
        detail: format!("value {value} with error estimate {err} above tolerance {tol}"),
    }
}

/// Runs a parsed command and returns its text output.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Coeffs { fprime0, fsecond0, m, tol, format } => {
            check_tol(tol)?;
            let cone = from_derivatives(fprime0, fsecond0)?;
            let mut rec = coeffs_record("coeffs", &cone, m, tol)?;
            rec.input("fprime0", fprime0).input("fsecond0", fsecond0);
            render(&rec, format)
        }
        Command::Scan { alpha_min, alpha_max, steps, tol, spacing, format } => {
            let t = scan(alpha_min, alpha_max, steps, tol, spacing)?;
            render_table(&t, format)
        }
        Command::Asymptotics { alphas, order, tol, format } => {
            let t = asymptotics(&alphas, order, tol)?;
            render_table(&t, format)
        }
        Command::Irrationality { jmax, format } => render_table(&irrationality(jmax)?, format),
        Command::Profile { input, degree, m, tol, format } => {
            check_tol(tol)?;
            let file = std::fs::File::open(&input)
                .map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
            let samples = read_profile_csv(file)?;
            let cone = from_profile_samples(&samples, degree)?;
            let mut rec = coeffs_record("profile", &cone, m, tol)?;
            rec.input("input", input.display().to_string())
                .input("degree", degree as u64)
                .input("samples", samples.len() as u64)
                .result("fprime0", cone.fprime0, 0.0, FIT)
                .result("fsecond0", cone.fsecond0, 0.0, FIT);
            render(&rec, format)
        }
        Command::Hfun { k, alpha, z, method, tol, format } => {
            render(&hfun_record(k, alpha, z, method, tol)?, format)
        }
    }
}

fn render(rec: &OutputRecord, format: Format) -> Result<String> {
    match format {
        Format::Json => rec.to_json().map(|s| s + "\n"),
        Format::Csv => rec.to_csv(),
    }
}

fn render_table(t: &Table, format: Format) -> Result<String> {
    match format {
        Format::Json => t.to_json().map(|s| s + "\n"),
        Format::Csv => t.to_csv(),
    }
}

/// Coefficient record for a germ; shared by `coeffs` and `profile`.
pub fn coeffs_record(command: &str, cone: &ConeData<f64>, m: u32, tol: f64) -> Result<OutputRecord> {
    if m < 2 {
        return Err(usage(format!("m = {m} must be at least 2")));
    }
    let heat = heat_coefficients(cone, tol)?;
    let res = resolvent_coefficients(cone, m, tol)?;
    let quad = Provenance::Quadrature.as_str();
    let mut rec = OutputRecord::new(command);
    rec.input("m", m).input("tol", tol);
    rec.result("alpha", cone.alpha, 0.0, CLOSED)
        .result("k_f", cone.k_f, 0.0, CLOSED)
        .result("b0", b0(cone), 0.0, CLOSED)
        .result("b_half", heat.b_half, heat.b_half_err, quad)
        .result("c0", heat.c0, 0.0, CLOSED)
        .result("c_half", heat.c_half, 0.0, CLOSED)
        .result("c1", c1(cone), 0.0, CLOSED)
        .result("b0m", res.b0m, 0.0, CLOSED)
        .result("b1m", res.b1m, res.b1m_err, quad)
        .result("c2m", c2m(cone, m)?, 0.0, CLOSED);
    let emb = embedding(cone);
    rec.note("embeddable", emb.embeddable.to_string())
        .note("curvature_class", curvature_class(cone).as_str());
    if let Some(phi) = emb.phi {
        rec.result("phi", phi, 0.0, CLOSED);
    }
    if let Some(k0) = emb.kappa0 {
        rec.result("kappa0", k0, 0.0, CLOSED);
    }
    Ok(rec)
}

/// Grid of `steps` alphas from `lo` to `hi`, both included.
pub fn alpha_grid(lo: f64, hi: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(usage(format!("need 0 < alpha-min < alpha-max, got {lo}, {hi}")));
    }
    if steps < 2 {
        return Err(usage(format!("steps = {steps} must be at least 2")));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                return hi;
            }
            let t = i as f64 / n;
            match spacing {
                Spacing::Linear => lo + (hi - lo) * t,
                Spacing::Geometric => lo * (hi / lo).powf(t),
            }
        })
        .collect())
}

pub fn scan(lo: f64, hi: f64, steps: usize, tol: f64, spacing: Spacing) -> Result<Table> {
    check_tol(tol)?;
    let alphas = alpha_grid(lo, hi, steps, spacing)?;
    let values: Vec<_> = alphas.par_iter().map(|&a| big_f(a, tol)).collect();
    let mut t = Table::new("scan", vec!["alpha", "F", "err_est", "provenance"]);
    t.input("alpha_min", lo)
        .input("alpha_max", hi)
        .input("steps", steps as u64)
        .input("tol", tol)
        .input("spacing", format!("{spacing:?}").to_lowercase());
    for (a, r) in alphas.iter().zip(values) {
        let r = r?;
        if !r.converged {
            return Err(non_converged("scan", r.value, r.err_est, tol));
        }
        t.push(vec![(*a).into(), r.value.into(), r.err_est.into(), Provenance::Quadrature.as_str().into()]);
    }
    Ok(t)
}

pub fn asymptotics(alphas: &[f64], order: u32, tol: f64) -> Result<Table> {
    check_tol(tol)?;
    if alphas.is_empty() {
        return Err(usage("no alphas given"));
    }
    if order == 0 {
        return Err(usage("order must be at least 1"));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(usage(format!("alpha = {a} must be positive")));
    }
    let rows: Vec<_> = alphas
        .par_iter()
        .map(|&a| -> Result<(f64, f64, f64)> {
            let f = big_f(a, tol)?;
            if !f.converged {
                return Err(non_converged("asymptotics", f.value, f.err_est, tol));
            }
            Ok((f.value, f.err_est, asymptotic_f(a, order)?))
        })
        .collect();
    let mut t = Table::new(
        "asymptotics",
        vec!["alpha", "F", "F_asym", "residual", "err_est", "provenance"],
    );
    t.input("alphas", alphas.to_vec()).input("order", order).input("tol", tol);
    for (a, r) in alphas.iter().zip(rows) {
        let (f, err, fa) = r?;
        t.push(vec![
            (*a).into(),
            f.into(),
            fa.into(),
            (f - fa).abs().into(),
            err.into(),
            Provenance::Quadrature.as_str().into(),
        ]);
    }
    Ok(t)
}

pub fn irrationality(jmax: u32) -> Result<Table> {
    if jmax.is_multiple_of(2) || jmax > crate::irrationality::J_MAX {
        return Err(usage(format!(
            "jmax = {jmax} must be odd and at most {}",
            crate::irrationality::J_MAX
        )));
    }
    let mut t = Table::new(
        "irrationality",
        vec![
            "j", "i_j", "i_j2", "v_j", "d_j", "lower_bound", "taylor_coeff", "root", "v_root",
            "err_est", "provenance",
        ],
    );
    t.input("jmax", jmax);
    for r in report(jmax)? {
        t.push(vec![
            Cell::Int(r.j as i64),
            r.i_j.into(),
            r.i_j2.into(),
            r.v_j.into(),
            r.d_j.into(),
            r.lower_bound.into(),
            r.taylor_coeff.into(),
            r.root.into(),
            r.v_root.into(),
            0.0.into(),
            CLOSED.into(),
        ]);
    }
    Ok(t)
}

pub fn hfun_record(k: usize, alpha: f64, z: f64, method: HMethodArg, tol: f64) -> Result<OutputRecord> {
    check_tol(tol)?;
    if k > 2 {
        return Err(usage(format!("k = {k} must be 0, 1 or 2")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(usage(format!("alpha = {alpha} must be positive")));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(usage(format!("z = {z} not in [0, 1]")));
    }
    let mut rec = OutputRecord::new("hfun");
    rec.input("k", k as u64)
        .input("alpha", alpha)
        .input("z", z)
        .input("method", format!("{method:?}").to_lowercase())
        .input("tol", tol);
    let reg0 = h_reg_at_zero(k, alpha)?;
    rec.result("h_reg0", reg0, 0.0, CLOSED);
    if z > 0.0 {
        let hs = h_sing(k, alpha, z)?;
        rec.result("h_sing", hs, 0.0, CLOSED);
        if method == HMethodArg::Oracle {
            let h = h_oracle(k, alpha, z, tol)?;
            let hh = (h.value - hs - reg0) / z;
            rec.result("h", h.value, h.err_est, "series")
                .result("h_hat", hh, h.err_est / z, "series")
                .note("method", "oracle");
            return Ok(rec);
        }
        rec.result("h", h_direct(k, alpha, z)?, 0.0, CLOSED);
    }
    let choice = match method {
        HMethodArg::Direct => MethodChoice::Direct,
        HMethodArg::Series => MethodChoice::Series,
        _ => MethodChoice::Auto,
    };
    let e = h_hat_with(k, alpha, z, tol, choice)?;
    let prov = match e.method {
        crate::hfun::HMethod::Series | crate::hfun::HMethod::Oracle => "series",
        _ => CLOSED,
    };
    rec.result("h_hat", e.value, e.err_est, prov)
        .note("method", e.method.as_str());
    if e.precision_loss {
        rec.note("precision_loss", "true");
    }
    if e.truncated {
        rec.note("truncated", "true");
    }
    Ok(rec)
}
