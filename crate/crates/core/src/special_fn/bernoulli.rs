//! Exact Bernoulli numbers (convention `B_1 = -1/2`).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Capacity of [`BernoulliTable::default`].
pub const DEFAULT_CAPACITY: usize = 64;

/// Capacity of the process-wide table used by the power series in
/// [`crate::hfun`]; those are allowed up to 200 terms past index `k + 1`.
pub const SHARED_CAPACITY: usize = 256;

/// Bernoulli numbers `B_0..=B_N` held as reduced rationals.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
    as_f64: Vec<f64>,
}

impl BernoulliTable {
    /// Builds `B_0..=B_max_index` from `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
    pub fn new(max_index: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        // binomial row C(n+1, 0..=n+1), updated in place
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for n in 1..=max_index {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;

            if n > 1 && n % 2 == 1 {
                values.push(BigRational::zero());
                continue;
            }
            // sum over k < n with common-denominator accumulation
            let mut acc = BigRational::zero();
            for (k, b) in values.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc += b * BigRational::from_integer(row[k].clone());
            }
            let bn = -acc / BigRational::from_integer(BigInt::from(n + 1));
            values.push(bn);
        }
        let as_f64 = values.iter().map(rational_to_f64).collect();
        Self { values, as_f64 }
    }

    /// Largest index held.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BigRational> {
        self.values.get(n).ok_or(Error::Capacity {
            index: n,
            capacity: self.max_index(),
        })
    }

    pub fn get_f64(&self, n: usize) -> Result<f64> {
        self.as_f64.get(n).copied().ok_or(Error::Capacity {
            index: n,
            capacity: self.max_index(),
        })
    }

    /// Float view, rounded once from the exact value.
    pub fn get_real<T: Real>(&self, n: usize) -> Result<T> {
        self.get_f64(n).map(T::lit)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Checks `sum_{k=0}^{n} C(n+1,k) B_k == 0` exactly for `1 <= n <= max_index`.
    pub fn recurrence_holds(&self) -> bool {
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for n in 1..=self.max_index() {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
            let mut acc = BigRational::zero();
            for (b, c) in self.values[..=n].iter().zip(&row) {
                acc += b * BigRational::from_integer(c.clone());
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(DEFAULT_CAPACITY)
    }
}

/// Process-wide table with [`SHARED_CAPACITY`], built on first use.
pub fn shared() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(SHARED_CAPACITY))
}

/// Exact `B_n` from the shared table.
pub fn bernoulli(n: usize) -> Result<BigRational> {
    shared().get(n).cloned()
}

/// `B_n` rounded to `T`.
pub fn bernoulli_real<T: Real>(n: usize) -> Result<T> {
    shared().get_real(n)
}

/// Correctly rounded conversion that survives numerators and denominators
/// beyond the `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(x) = q.to_f64() {
        if x.is_finite() && x != 0.0 {
            return x;
        }
    }
    // scale by a power of two so both parts fit, then undo
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    let shift = num_bits - den_bits;
    let scaled = if shift >= 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::NAN);
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * mantissa.abs() * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}
