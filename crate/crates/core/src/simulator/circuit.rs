//! The semiclassical order-finding circuit on a [`SparseState`].
//!
//! Each step applies H to the QFT qubit, the controlled multiplication by
//! `a^(2^(t - tau))`, the measurement-conditioned phase, a second H and a
//! measurement. The QFT qubit is reset to |0> after every measurement.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ShorInstance, SimError, SparseState};
use crate::numtheory::{mod_pow, recover_period};

/// Smallest branch weight accepted after a projective measurement.
pub const MIN_BRANCH_WEIGHT: f64 = 1e-14;

/// Source of measurement outcomes.
pub trait OutcomeSampler {
    /// Picks the outcome of step `tau` given the probability of reading 0.
    fn choose(&mut self, tau: u32, p_zero: f64) -> Result<u8, SimError>;
}

/// Born-rule sampling: outcome 0 iff a uniform draw falls below `p_zero`.
pub struct BornSampler {
    rng: ChaCha8Rng,
}

impl BornSampler {
    pub fn from_seed(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl OutcomeSampler for BornSampler {
    fn choose(&mut self, _tau: u32, p_zero: f64) -> Result<u8, SimError> {
        let u: f64 = self.rng.gen();
        Ok(u8::from(u >= p_zero))
    }
}

/// Replays a fixed list of outcomes.
pub struct ForcedOutcomes {
    outcomes: Vec<u8>,
}

impl ForcedOutcomes {
    pub fn new(outcomes: Vec<u8>) -> Self {
        Self { outcomes }
    }
}

impl OutcomeSampler for ForcedOutcomes {
    fn choose(&mut self, tau: u32, _p_zero: f64) -> Result<u8, SimError> {
        self.outcomes
            .get(tau as usize - 1)
            .copied()
            .ok_or(SimError::OutcomesExhausted { tau })
    }
}

/// Result of one execution of the circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    /// `m_1 .. m_t`
    pub outcomes: Vec<u8>,
    /// `sum_j m_j 2^(j-1)`; the phase estimate is `x_num / 2^t`.
    pub x_num: u64,
    pub t: u32,
    pub success: bool,
    pub found_period: Option<u64>,
    pub seed: u64,
}

impl RunRecord {
    pub(crate) fn assemble(instance: &ShorInstance, outcomes: Vec<u8>, seed: u64) -> Self {
        let x_num = phase_numerator(&outcomes);
        let rec = recover_period(x_num, instance.t, instance.a, instance.modulus, instance.period());
        Self {
            outcomes,
            x_num,
            t: instance.t,
            success: rec.success,
            found_period: rec.found,
            seed,
        }
    }

    pub fn x(&self) -> f64 {
        self.x_num as f64 / (1u64 << self.t) as f64
    }
}

/// `sum_j m_j 2^(j-1)`: the first outcome is the least significant bit.
pub fn phase_numerator(outcomes: &[u8]) -> u64 {
    outcomes
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &m)| acc | (u64::from(m & 1) << j))
}

/// Feedback rotation for step `tau`: `-pi * sum_{j<tau} m_j 2^-(tau-j)`.
pub fn feedback_phase(prior_outcomes: &[u8]) -> f64 {
    let tau = prior_outcomes.len() as u32 + 1;
    if tau == 1 {
        return 0.0;
    }
    let numerator = phase_numerator(prior_outcomes) as f64;
    -PI * numerator / (1u64 << (tau - 1)) as f64
}

/// What happened in one step, with the state at the probe position.
#[derive(Debug, Clone)]
pub struct StepTrace {
    pub tau: u32,
    /// state right before the second Hadamard
    pub state_at_probe: SparseState,
    pub outcome: u8,
    pub outcome_probability: f64,
}

/// Serialisable per-step summary, one JSON line each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSummary {
    pub tau: u32,
    pub outcome: u8,
    pub probability: f64,
    pub support_size: usize,
}

impl From<&StepTrace> for StepSummary {
    fn from(s: &StepTrace) -> Self {
        Self {
            tau: s.tau,
            outcome: s.outcome,
            probability: s.outcome_probability,
            support_size: s.state_at_probe.support_size(),
        }
    }
}

/// `|0>_qft |1>_register`.
pub fn init_state(instance: &ShorInstance) -> SparseState {
    SparseState::basis(instance.num_qubits, 1)
}

/// Multiplies the register by `a^exponent mod N` on the QFT-qubit-1 branch.
pub fn controlled_modmul(
    state: &mut SparseState,
    a: u64,
    exponent: u64,
    modulus: u64,
    control: u32,
) -> Result<(), SimError> {
    let multiplier = mod_pow(a, exponent, modulus);
    let control_mask = 1u64 << control;
    let register_mask = control_mask - 1;
    if let Some(bad) = state.support().map(|k| k & register_mask).find(|&y| y >= modulus) {
        return Err(SimError::CorruptRegister { value: bad, modulus });
    }
    state.relabel(|k| {
        if k & control_mask == 0 {
            k
        } else {
            let y = k & register_mask;
            control_mask | ((y as u128 * multiplier as u128 % modulus as u128) as u64)
        }
    });
    Ok(())
}

/// One semiclassical step. `prior_outcomes` holds `m_1 .. m_(tau-1)`.
pub fn step(
    mut state: SparseState,
    instance: &ShorInstance,
    tau: u32,
    prior_outcomes: &[u8],
    sampler: &mut dyn OutcomeSampler,
) -> Result<(SparseState, StepTrace), SimError> {
    if tau == 0 || tau > instance.t {
        return Err(SimError::StepOutOfRange { tau, t: instance.t });
    }
    let q = instance.qft_qubit();
    state.hadamard(q);
    controlled_modmul(&mut state, instance.a, instance.step_exponent(tau), instance.modulus, q)?;
    state.phase(q, feedback_phase(prior_outcomes));
    let probe = state.clone();
    state.hadamard(q);

    let p_zero = state.probability_zero(q).clamp(0.0, 1.0);
    let outcome = sampler.choose(tau, p_zero)?;
    let probability = if outcome == 0 { p_zero } else { 1.0 - p_zero };
    let weight = state.project(q, outcome);
    if weight < MIN_BRANCH_WEIGHT {
        return Err(SimError::NormLoss { tau, weight });
    }
    if outcome == 1 {
        let mask = 1u64 << q;
        state.relabel(|k| k ^ mask);
    }
    Ok((
        state,
        StepTrace {
            tau,
            state_at_probe: probe,
            outcome,
            outcome_probability: probability,
        },
    ))
}

/// Runs all `t` steps with the given outcome source.
pub fn run_with(
    instance: &ShorInstance,
    sampler: &mut dyn OutcomeSampler,
    seed: u64,
    probe: bool,
) -> Result<(RunRecord, Option<Vec<StepTrace>>), SimError> {
    let mut state = init_state(instance);
    let mut outcomes = Vec::with_capacity(instance.t as usize);
    let mut traces = probe.then(Vec::new);
    for tau in 1..=instance.t {
        let (next, trace) = step(state, instance, tau, &outcomes, sampler)?;
        state = next;
        outcomes.push(trace.outcome);
        if let Some(traces) = traces.as_mut() {
            traces.push(trace);
        }
    }
    Ok((RunRecord::assemble(instance, outcomes, seed), traces))
}

/// Seeded Born-rule execution; identical seeds give identical records.
pub fn run(
    instance: &ShorInstance,
    seed: u64,
    probe: bool,
) -> Result<(RunRecord, Option<Vec<StepTrace>>), SimError> {
    run_with(instance, &mut BornSampler::from_seed(seed), seed, probe)
}
