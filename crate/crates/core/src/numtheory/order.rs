use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::arith::{ceil_log2, factorize, gcd, lcm, mod_pow};
use super::NumTheoryError;

/// Default largest modulus accepted by [`order_spectrum`].
pub const DEFAULT_SPECTRUM_BOUND: u64 = 1_000_000;

/// `r = 2^k * r_odd`, with the quantities derived from it that shape the
/// support schedule of the order-finding circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodDecomposition {
    pub r: u64,
    pub k: u32,
    pub r_odd: u64,
    /// `ceil(log2 r_odd)`, the last step of the doubling ramp.
    pub tau_star: u32,
    /// 1 for odd `r`, 0 for even.
    pub epsilon: u32,
}

pub fn split_period(r: u64) -> PeriodDecomposition {
    assert!(r >= 1, "period must be positive");
    let k = r.trailing_zeros();
    let r_odd = r >> k;
    PeriodDecomposition {
        r,
        k,
        r_odd,
        tau_star: ceil_log2(r_odd),
        epsilon: u32::from(k == 0),
    }
}

/// Carmichael function for a factored modulus.
fn carmichael_from_factors(factors: &[(u64, u32)]) -> u64 {
    factors.iter().fold(1, |acc, &(p, e)| {
        let lam = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            (p - 1) * p.pow(e - 1)
        };
        lcm(acc, lam)
    })
}

/// Carmichael function lambda(n): exponent of the unit group mod n.
pub fn carmichael(n: u64) -> u64 {
    carmichael_from_factors(&factorize(n))
}

/// Order of `a` given the factorisation of a known multiple of it.
fn order_by_descent(a: u64, modulus: u64, lambda: u64, lambda_factors: &[(u64, u32)]) -> u64 {
    let mut r = lambda;
    for &(p, _) in lambda_factors {
        while r % p == 0 && mod_pow(a, r / p, modulus) == 1 {
            r /= p;
        }
    }
    r
}

/// Smallest `r > 0` with `a^r = 1 (mod modulus)`.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64, NumTheoryError> {
    if modulus < 2 {
        return Err(NumTheoryError::InvalidModulus(modulus));
    }
    let a = a % modulus;
    let g = gcd(a, modulus);
    if g != 1 {
        return Err(NumTheoryError::NotCoprime { a, modulus, gcd: g });
    }
    let lambda = carmichael(modulus);
    Ok(order_by_descent(a, modulus, lambda, &factorize(lambda)))
}

/// Distribution of multiplicative orders over the unit group mod `modulus`.
///
/// Frequencies are kept as exact integer counts over `total_coprimes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSpectrum {
    pub modulus: u64,
    pub lambda: u64,
    pub total_coprimes: u64,
    /// order -> number of units with that order
    pub counts: BTreeMap<u64, u64>,
}

impl OrderSpectrum {
    /// g(r) as a float; 0 for orders that never occur.
    pub fn frequency(&self, r: u64) -> f64 {
        self.counts.get(&r).map_or(0.0, |&c| c as f64 / self.total_coprimes as f64)
    }

    pub fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Units in `[2, modulus)` grouped by order, each list ascending.
    pub fn units_by_order(&self) -> BTreeMap<u64, Vec<u64>> {
        let factors = factorize(self.lambda);
        let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for a in (2..self.modulus).filter(|&a| gcd(a, self.modulus) == 1) {
            let r = order_by_descent(a, self.modulus, self.lambda, &factors);
            groups.entry(r).or_default().push(a);
        }
        groups
    }

    /// All units in `[2, modulus)` whose order is exactly `r`, ascending.
    pub fn units_with_order(&self, r: u64) -> Vec<u64> {
        let factors = factorize(self.lambda);
        (2..self.modulus)
            .filter(|&a| gcd(a, self.modulus) == 1)
            .filter(|&a| order_by_descent(a, self.modulus, self.lambda, &factors) == r)
            .collect()
    }
}

/// Enumerates every unit `a` in `[2, N)` and tallies their orders. The
/// identity is left out since it is never a valid base for order finding.
pub fn order_spectrum(modulus: u64, bound: u64) -> Result<OrderSpectrum, NumTheoryError> {
    if modulus < 2 {
        return Err(NumTheoryError::InvalidModulus(modulus));
    }
    if modulus > bound {
        return Err(NumTheoryError::BoundExceeded { modulus, bound });
    }
    let lambda = carmichael(modulus);
    let lambda_factors = factorize(lambda);
    let orders: Vec<u64> = (2..modulus)
        .into_par_iter()
        .filter(|&a| gcd(a, modulus) == 1)
        .map(|a| order_by_descent(a, modulus, lambda, &lambda_factors))
        .collect();
    let mut counts = BTreeMap::new();
    for r in &orders {
        *counts.entry(*r).or_insert(0u64) += 1;
    }
    Ok(OrderSpectrum {
        modulus,
        lambda,
        total_coprimes: orders.len() as u64,
        counts,
    })
}
