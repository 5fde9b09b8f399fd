//! Full state-vector reference implementation of the same circuit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::circuit::{feedback_phase, BornSampler, OutcomeSampler, RunRecord, MIN_BRANCH_WEIGHT};
use super::{ShorInstance, SimError};
use crate::numtheory::mod_pow;

pub const MAX_DENSE_QUBITS: u32 = 12;

/// A dense run: the record plus per-step probe vectors and outcome probabilities.
#[derive(Debug, Clone)]
pub struct DenseRun {
    pub record: RunRecord,
    pub outcome_probabilities: Vec<f64>,
    /// full `2^L` amplitude vector right before each step's second Hadamard
    pub probes: Vec<Vec<Complex64>>,
}

fn hadamard(v: &mut [Complex64], qubit: u32) {
    let mask = 1usize << qubit;
    for i in 0..v.len() {
        if i & mask == 0 {
            let (a, b) = (v[i], v[i | mask]);
            v[i] = (a + b) * FRAC_1_SQRT_2;
            v[i | mask] = (a - b) * FRAC_1_SQRT_2;
        }
    }
}

pub fn dense_run_with(
    instance: &ShorInstance,
    sampler: &mut dyn OutcomeSampler,
    seed: u64,
) -> Result<DenseRun, SimError> {
    let l = instance.num_qubits;
    if l > MAX_DENSE_QUBITS {
        return Err(SimError::TooManyQubits { qubits: l, limit: MAX_DENSE_QUBITS });
    }
    let dim = 1usize << l;
    let q = instance.qft_qubit();
    let top = 1usize << q;
    let n = instance.modulus as usize;
    let mut v = vec![Complex64::default(); dim];
    v[1] = Complex64::new(1.0, 0.0);
    let mut outcomes = Vec::with_capacity(instance.t as usize);
    let mut outcome_probabilities = Vec::with_capacity(instance.t as usize);
    let mut probes = Vec::with_capacity(instance.t as usize);
    for tau in 1..=instance.t {
        hadamard(&mut v, q);
        // permutation y -> m*y mod N on the controlled half, identity on y >= N
        let m = mod_pow(instance.a, instance.step_exponent(tau), instance.modulus) as usize;
        let mut permuted = v.clone();
        for y in 0..top {
            let image = if y < n { m * y % n } else { y };
            permuted[top | image] = v[top | y];
        }
        v = permuted;
        let w = Complex64::from_polar(1.0, feedback_phase(&outcomes));
        for amp in &mut v[top..] {
            *amp *= w;
        }
        probes.push(v.clone());
        hadamard(&mut v, q);
        let p_zero: f64 = v[..top].iter().map(|a| a.norm_sqr()).sum();
        let outcome = sampler.choose(tau, p_zero.clamp(0.0, 1.0))?;
        let kept = if outcome == 0 { 0..top } else { top..dim };
        let weight: f64 = v[kept.clone()].iter().map(|a| a.norm_sqr()).sum();
        if weight < MIN_BRANCH_WEIGHT {
            return Err(SimError::NormLoss { tau, weight });
        }
        let scale = 1.0 / weight.sqrt();
        let mut next = vec![Complex64::default(); dim];
        for (dst, src) in next[..top].iter_mut().zip(&v[kept]) {
            *dst = src * scale;
        }
        v = next;
        outcomes.push(outcome);
        outcome_probabilities.push(if outcome == 0 { p_zero } else { 1.0 - p_zero });
    }
    Ok(DenseRun {
        record: RunRecord::assemble(instance, outcomes, seed),
        outcome_probabilities,
        probes,
    })
}

/// Dense counterpart of [`super::run`] for `L <= 12`.
pub fn dense_reference(instance: &ShorInstance, seed: u64) -> Result<DenseRun, SimError> {
    dense_run_with(instance, &mut BornSampler::from_seed(seed), seed)
}
