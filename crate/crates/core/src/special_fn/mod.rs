//! Exact Bernoulli numbers and real gamma-family functions.

mod bernoulli;
mod gamma;

pub use bernoulli::{
    bernoulli, bernoulli_real, rational_to_f64, shared as shared_bernoulli, BernoulliTable,
    DEFAULT_CAPACITY, SHARED_CAPACITY,
};
pub use gamma::{digamma, gamma, log_gamma, recip_gamma};
