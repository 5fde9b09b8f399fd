//! Fast sampler for the order-finding circuit.
//!
//! The register only ever holds values `a^j mod N`, so after each reset the
//! state is a vector over the exponents `j` in Z_r and the controlled
//! multiplication becomes a cyclic shift. Sampling uses the same draws as
//! [`super::run`], so records agree for matched seeds.

use num_complex::Complex64;

use super::circuit::{feedback_phase, BornSampler, OutcomeSampler, RunRecord, MIN_BRANCH_WEIGHT};
use super::{ShorInstance, SimError};
use crate::numtheory::mod_pow;

pub struct OrbitSampler {
    instance: ShorInstance,
    amps: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl OrbitSampler {
    pub fn new(instance: ShorInstance) -> Self {
        let r = instance.period() as usize;
        Self {
            instance,
            amps: vec![Complex64::default(); r],
            scratch: vec![Complex64::default(); r],
        }
    }

    pub fn instance(&self) -> &ShorInstance {
        &self.instance
    }

    /// Register amplitudes indexed by exponent `j` (value `a^j mod N`).
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn run(&mut self, seed: u64) -> Result<RunRecord, SimError> {
        self.run_with(&mut BornSampler::from_seed(seed), seed)
    }

    pub fn run_with(&mut self, sampler: &mut dyn OutcomeSampler, seed: u64) -> Result<RunRecord, SimError> {
        let inst = self.instance;
        let r = inst.period();
        let k = inst.decomposition.k;
        self.amps.fill(Complex64::default());
        self.amps[0] = Complex64::new(1.0, 0.0);
        let mut outcomes = Vec::with_capacity(inst.t as usize);
        for tau in 1..=inst.t {
            let c = Complex64::from_polar(1.0, feedback_phase(&outcomes));
            let shift = mod_pow(2, u64::from(inst.t - tau), r) as usize;
            let outcome = if shift == 0 {
                // identity permutation: the register is untouched
                let p_zero = ((Complex64::new(1.0, 0.0) + c).norm_sqr() / 4.0).clamp(0.0, 1.0);
                let outcome = sampler.choose(tau, p_zero)?;
                let weight = if outcome == 0 { p_zero } else { 1.0 - p_zero };
                if weight < MIN_BRANCH_WEIGHT {
                    return Err(SimError::NormLoss { tau, weight });
                }
                outcome
            } else {
                // support lies on multiples of 2^min(k, t - tau)
                let stride = 1usize << k.min(inst.t - tau);
                self.shift_and_measure(tau, shift, stride, c, sampler)?
            };
            outcomes.push(outcome);
        }
        Ok(RunRecord::assemble(&inst, outcomes, seed))
    }

    fn shift_and_measure(
        &mut self,
        tau: u32,
        shift: usize,
        stride: usize,
        c: Complex64,
        sampler: &mut dyn OutcomeSampler,
    ) -> Result<u8, SimError> {
        let r = self.amps.len();
        let amps = &self.amps;
        let (mut p_zero, mut p_one) = (0.0, 0.0);
        // beta_0(j) = (a_j + c a_{j - shift}) / 2 and beta_1 = a - beta_0
        for j in (0..r).step_by(stride) {
            let src = if j >= shift { j - shift } else { j + r - shift };
            let b = (amps[j] + c * amps[src]) * 0.5;
            self.scratch[j] = b;
            p_zero += b.norm_sqr();
            p_one += (amps[j] - b).norm_sqr();
        }
        let outcome = sampler.choose(tau, p_zero.clamp(0.0, 1.0))?;
        let weight = if outcome == 0 { p_zero } else { p_one };
        if weight < MIN_BRANCH_WEIGHT {
            return Err(SimError::NormLoss { tau, weight });
        }
        let scale = 1.0 / weight.sqrt();
        if outcome == 0 {
            for j in (0..r).step_by(stride) {
                self.amps[j] = self.scratch[j] * scale;
            }
        } else {
            for j in (0..r).step_by(stride) {
                self.amps[j] = (self.amps[j] - self.scratch[j]) * scale;
            }
        }
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::run;

    #[test]
    fn matches_sparse_engine() {
        for (n, a) in [(15u64, 7u64), (15, 4), (15, 14), (21, 2), (33, 5), (35, 3), (91, 5), (143, 2)] {
            let inst = ShorInstance::new(n, a).unwrap();
            let mut fast = OrbitSampler::new(inst);
            for seed in 0..40 {
                let (slow, _) = run(&inst, seed, false).unwrap();
                assert_eq!(fast.run(seed).unwrap(), slow, "N={n} a={a} seed={seed}");
            }
        }
    }

    #[test]
    fn shortened_circuits_match_too() {
        let inst = ShorInstance::new(143, 2).unwrap();
        for t in [1, 3, 6, 10] {
            let inst = inst.with_steps(t).unwrap();
            let mut fast = OrbitSampler::new(inst);
            for seed in 0..20 {
                assert_eq!(fast.run(seed).unwrap(), run(&inst, seed, false).unwrap().0);
            }
        }
    }
}
