//! Continued fractions of dyadic rationals and textbook period recovery.

use serde::Serialize;

use super::arith::mod_pow;

/// Simple continued fraction `[0; a_1, a_2, ...]` of a rational in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ContinuedFraction {
    pub coefficients: Vec<u64>,
    /// `(numerator, denominator)` of each convergent, in lowest terms.
    pub convergents: Vec<(u64, u64)>,
}

impl ContinuedFraction {
    pub fn denominators(&self) -> impl Iterator<Item = u64> + '_ {
        self.convergents.iter().map(|&(_, d)| d)
    }
}

/// Expands `numerator / 2^bits` by Euclid's algorithm.
pub fn continued_fraction_expand(numerator: u64, bits: u32) -> ContinuedFraction {
    assert!(bits < 64, "at most 63 fraction bits are supported");
    let denominator = 1u64 << bits;
    assert!(numerator < denominator, "fraction must lie in [0, 1)");
    expand_rational(numerator, denominator)
}

pub(crate) fn expand_rational(numerator: u64, denominator: u64) -> ContinuedFraction {
    let mut cf = ContinuedFraction::default();
    let (mut p, mut q) = (denominator as u128, numerator as u128);
    // h_{-1}/k_{-1} = 1/0 and h_0/k_0 = 0/1 for the leading zero term.
    let (mut h_prev, mut h) = (1u128, 0u128);
    let (mut k_prev, mut k) = (0u128, 1u128);
    while q != 0 {
        let a = p / q;
        (p, q) = (q, p % q);
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
        cf.coefficients.push(a as u64);
        cf.convergents.push((h as u64, k as u64));
    }
    cf
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Recovery {
    pub success: bool,
    /// First convergent denominator `d <= N` with `a^d = 1 (mod N)`.
    pub found: Option<u64>,
}

/// Scans the convergent denominators of `x = measured / 2^bits` in
/// increasing order for the first `d <= modulus` with `a^d = 1`.
/// Success requires that `d` is exactly `true_period`; multiples count as
/// failures, and submultiples never pass the power test.
pub fn recover_period(measured: u64, bits: u32, a: u64, modulus: u64, true_period: u64) -> Recovery {
    let cf = continued_fraction_expand(measured, bits);
    let found = cf
        .denominators()
        .take_while(|&d| d <= modulus)
        .find(|&d| mod_pow(a, d, modulus) == 1);
    Recovery {
        success: found == Some(true_period),
        found,
    }
}
