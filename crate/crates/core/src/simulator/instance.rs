use serde::Serialize;

use super::SimError;
use crate::numtheory::{ceil_log2, gcd, multiplicative_order, split_period, PeriodDecomposition};

/// Largest number of semiclassical steps; keeps the phase estimate in a `u64`.
pub const MAX_STEPS: u32 = 62;

/// One order-finding problem: modulus, base, register width and step count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShorInstance {
    pub modulus: u64,
    pub a: u64,
    /// register qubits, `ceil(log2 N)`
    pub n: u32,
    /// semiclassical steps
    pub t: u32,
    /// total qubits, `n + 1`
    pub num_qubits: u32,
    pub decomposition: PeriodDecomposition,
}

impl ShorInstance {
    /// Instance with the default depth `t = 2n + 1`.
    pub fn new(modulus: u64, a: u64) -> Result<Self, SimError> {
        if modulus < 3 {
            return Err(SimError::InvalidInstance(format!("modulus {modulus} must be at least 3")));
        }
        if a < 2 || a >= modulus {
            return Err(SimError::InvalidInstance(format!("base {a} must lie in [2, {modulus})")));
        }
        if gcd(a, modulus) != 1 {
            return Err(SimError::InvalidInstance(format!(
                "base {a} is not coprime to {modulus}"
            )));
        }
        let n = ceil_log2(modulus);
        if n + 1 > 63 {
            return Err(SimError::InvalidInstance(format!("modulus {modulus} is too wide")));
        }
        let r = multiplicative_order(a, modulus).map_err(|e| SimError::InvalidInstance(e.to_string()))?;
        let t = (2 * n + 1).min(MAX_STEPS);
        Ok(Self {
            modulus,
            a,
            n,
            t,
            num_qubits: n + 1,
            decomposition: split_period(r),
        })
    }

    /// Same instance with a different number of steps.
    pub fn with_steps(mut self, t: u32) -> Result<Self, SimError> {
        if t == 0 || t > MAX_STEPS {
            return Err(SimError::InvalidInstance(format!("step count {t} outside [1, {MAX_STEPS}]")));
        }
        self.t = t;
        Ok(self)
    }

    pub fn period(&self) -> u64 {
        self.decomposition.r
    }

    /// Default depth `2n + 1`.
    pub fn max_steps(&self) -> u32 {
        (2 * self.n + 1).min(MAX_STEPS)
    }

    /// Bit position of the reused QFT qubit.
    pub fn qft_qubit(&self) -> u32 {
        self.n
    }

    /// Exponent `2^(t - tau)` applied by the controlled multiplication of step `tau`.
    pub fn step_exponent(&self, tau: u32) -> u64 {
        1u64 << (self.t - tau)
    }
}
