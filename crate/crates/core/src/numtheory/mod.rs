//! Classical number theory for order finding.

mod arith;
mod fraction;
mod order;

use thiserror::Error;

pub use arith::{ceil_log2, factorize, gcd, is_prime, lcm, mod_pow, mul_mod};
pub use fraction::{continued_fraction_expand, recover_period, ContinuedFraction, Recovery};
pub use order::{
    carmichael, multiplicative_order, order_spectrum, split_period, OrderSpectrum,
    PeriodDecomposition, DEFAULT_SPECTRUM_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("modulus {0} is too small")]
    InvalidModulus(u64),
    #[error("{a} shares the factor {gcd} with {modulus}")]
    NotCoprime { a: u64, modulus: u64, gcd: u64 },
    #[error("modulus {modulus} exceeds the spectrum bound {bound}")]
    BoundExceeded { modulus: u64, bound: u64 },
}
