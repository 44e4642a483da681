//! Cone germs from derivatives or sampled profiles, and the data of the
//! corresponding surface of revolution.

use std::io::Read;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::coefficients::ConeData;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One sample `(r, f(r))` of the warping function.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ProfileSample<T> {
    pub r: T,
    #[serde(rename = "f")]
    pub f_r: T,
}

impl<T: Real> ProfileSample<T> {
    pub fn new(r: T, f_r: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::Validation(format!("sample radius r = {r} must be positive")));
        }
        if !(f_r > T::zero()) || !f_r.is_finite() {
            return Err(Error::Validation(format!("sample f(r) = {f_r} must be positive")));
        }
        Ok(Self { r, f_r })
    }
}

/// Cone angle and tip curvature of the profile curve when the cone embeds
/// as a surface of revolution in R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingData<T> {
    pub embeddable: bool,
    /// `arcsin f'(0)`, present when embeddable.
    pub phi: Option<T>,
    /// `(f''(0)/f'(0)) tan φ`, present when `φ < π/2`.
    pub kappa0: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureClass {
    Finite,
    PlusInfinity,
    MinusInfinity,
}

impl CurvatureClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CurvatureClass::Finite => "finite",
            CurvatureClass::PlusInfinity => "plus_infinity",
            CurvatureClass::MinusInfinity => "minus_infinity",
        }
    }
}

pub fn from_derivatives<T: Real>(fprime0: T, fsecond0: T) -> Result<ConeData<T>> {
    ConeData::new(fprime0, fsecond0)
}

pub fn embedding<T: Real>(cone: &ConeData<T>) -> EmbeddingData<T> {
    let a = cone.fprime0;
    if a > T::one() {
        return EmbeddingData { embeddable: false, phi: None, kappa0: None };
    }
    if a == T::one() {
        return EmbeddingData {
            embeddable: true,
            phi: Some(T::FRAC_PI_2()),
            kappa0: None,
        };
    }
    let phi = a.asin();
    EmbeddingData {
        embeddable: true,
        phi: Some(phi),
        kappa0: Some(cone.fsecond0 / a * phi.tan()),
    }
}

/// Limit of the Gaussian curvature at the tip.
pub fn curvature_class<T: Real>(cone: &ConeData<T>) -> CurvatureClass {
    if cone.fsecond0 == T::zero() {
        CurvatureClass::Finite
    } else if cone.fsecond0 < T::zero() {
        CurvatureClass::PlusInfinity
    } else {
        CurvatureClass::MinusInfinity
    }
}

/// Least-squares solution of `A x ≈ y` with `A` given by rows.
fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let a = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * f64::EPSILON * rows.len() as f64) {
        return Err(Error::Fit("design matrix is rank deficient".into()));
    }
    let x = svd
        .solve(&DVector::from_column_slice(y), 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Fits `f(r) ≈ a r + b r²/2 (+ c r³/6)` through the origin and returns the
/// germ `(a, b)`.
pub fn from_profile_samples<T: Real>(
    samples: &[ProfileSample<T>],
    degree: usize,
) -> Result<ConeData<T>> {
    if !(2..=3).contains(&degree) {
        return Err(Error::Fit(format!("degree {degree} not in {{2, 3}}")));
    }
    if samples.len() < degree + 1 {
        return Err(Error::Fit(format!(
            "{} samples, at least {} needed for degree {degree}",
            samples.len(),
            degree + 1
        )));
    }
    for w in samples.windows(2) {
        if !(w[0].r < w[1].r) {
            return Err(Error::Fit("sample radii must be distinct and increasing".into()));
        }
    }
    for s in samples {
        ProfileSample::new(s.r, s.f_r)?;
    }
    // scale r to O(1) so the columns are comparable
    let h = samples.last().map_or(1.0, |s| s.r.to_f64().unwrap_or(1.0));
    let basis = |r: T| -> Vec<f64> {
        let x = r.to_f64().unwrap_or(f64::NAN) / h;
        let mut row = vec![x, x * x / 2.0];
        if degree == 3 {
            row.push(x * x * x / 6.0);
        }
        row
    };
    let a: Vec<Vec<f64>> = samples.iter().map(|s| basis(s.r)).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.f_r.to_f64().unwrap_or(f64::NAN)).collect();
    let x = least_squares(&a, &y)?;
    let fprime0 = T::lit(x[0] / h);
    let fsecond0 = T::lit(x[1] / (h * h));
    if !(fprime0 > T::zero()) {
        return Err(Error::Validation(format!("fitted f'(0) = {fprime0} is not positive")));
    }
    from_derivatives(fprime0, fsecond0)
}

/// Reads a profile CSV with header `r,f`.
pub fn read_profile_csv<R: Read>(reader: R) -> Result<Vec<ProfileSample<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 1, detail: e.to_string() })?
        .clone();
    if headers.is_empty() {
        return Err(Error::Parse { line: 1, detail: "empty input".into() });
    }
    if headers.len() != 2 || &headers[0] != "r" || &headers[1] != "f" {
        return Err(Error::Parse {
            line: 1,
            detail: format!("expected header `r,f`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.deserialize::<ProfileSample<f64>>() {
        let s = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            detail: e.to_string(),
        })?;
        let line = out.len() + 2;
        let s = ProfileSample::new(s.r, s.f_r)
            .map_err(|e| Error::Parse { line, detail: e.to_string() })?;
        out.push(s);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 2, detail: "no samples".into() });
    }
    Ok(out)
}
