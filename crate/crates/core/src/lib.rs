//! Heat-trace and resolvent-trace coefficients of a curved conical
//! singularity on a surface with metric `dr² + f(r)² dθ²` near the tip.
//!
//! Everything depends only on the germ `(f'(0), f''(0))`, with
//! `α = 1/f'(0)` and `k_f = -f''(0)/f'(0)`. The numerically interesting
//! coefficient is `b_{1/2} = -(2 k_f/√π) F(α)/α`, where `F` is an integral
//! of regularized series [`hfun::h_hat`] computed by [`coefficients::big_f`].
//!
//! Numerical routines are generic over [`scalar::Real`] (`f32`, `f64`).
//!
//! ```
//! use conetrace::{coefficients, ConeData64};
//!
//! let cone = ConeData64::new(0.5, 1.0).unwrap();
//! let b = coefficients::b_half(&cone, 1e-12).unwrap();
//! assert!((b.value + std::f64::consts::PI.sqrt() / 8.0).abs() < 1e-12);
//! ```

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod geometry;
pub mod hfun;
pub mod irrationality;
pub mod output;
pub mod quadrature;
pub mod scalar;
pub mod special_fn;

pub use error::{Error, Result};

pub type ConeData64 = coefficients::ConeData<f64>;
pub type ConeData32 = coefficients::ConeData<f32>;
pub type HEval64 = hfun::HEval<f64>;
pub type QuadResult64 = quadrature::QuadResult<f64>;
pub type ProfileSample64 = geometry::ProfileSample<f64>;
pub type EmbeddingData64 = geometry::EmbeddingData<f64>;
pub type HeatCoefficients64 = coefficients::HeatCoefficients<f64>;
pub type ResolventCoefficients64 = coefficients::ResolventCoefficients<f64>;
