use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::model::{d_schedule, m2_structured, Regime};
use super::{lambda_closed, lambda_exact, MagicError, SupportSet};
use crate::numtheory::mul_mod;
use crate::simulator::ShorInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    /// count quadruplets on the materialised support
    Exact,
    /// random-support estimate
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub tau: u32,
    pub d: u64,
    pub l_eff: u32,
    pub lambda: f64,
    pub m2_analytic: f64,
    /// simulated value, filled in by callers that can afford it
    pub m2_exact: Option<f64>,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagicCurve {
    pub instance: ShorInstance,
    pub mode: LambdaMode,
    pub entries: Vec<CurvePoint>,
}

impl MagicCurve {
    pub fn final_point(&self) -> &CurvePoint {
        self.entries.last().expect("curves have at least one step")
    }

    /// `M2 / (L log 2)` at the last step.
    pub fn final_ratio(&self) -> f64 {
        self.final_point().m2_analytic / (self.instance.num_qubits as f64 * LN_2)
    }
}

/// Register exponents `j` (value `a^j mod N`) reachable after each step,
/// ignoring accidental amplitude cancellations.
pub(crate) struct ExponentSets {
    r: u64,
    present: Vec<bool>,
    members: Vec<u64>,
}

impl ExponentSets {
    pub(crate) fn new(r: u64) -> Self {
        let mut present = vec![false; r as usize];
        present[0] = true;
        Self { r, present, members: vec![0] }
    }

    pub(crate) fn members(&self) -> &[u64] {
        &self.members
    }

    /// `S <- S u (S + shift)`.
    pub(crate) fn absorb(&mut self, shift: u64) {
        let shift = shift % self.r;
        let added: Vec<u64> = self
            .members
            .iter()
            .map(|&j| (j + shift) % self.r)
            .filter(|&j| !self.present[j as usize])
            .collect();
        for j in added {
            if !self.present[j as usize] {
                self.present[j as usize] = true;
                self.members.push(j);
            }
        }
    }
}

/// `a^j mod N` for `j` in `0..r`.
pub(crate) fn orbit_values(instance: &ShorInstance) -> Vec<u64> {
    let r = instance.period() as usize;
    let mut out = Vec::with_capacity(r);
    let mut v = 1u64;
    for _ in 0..r {
        out.push(v);
        v = mul_mod(v, instance.a, instance.modulus);
    }
    out
}

/// L-bit support of the probe state at step `tau`, given the register
/// exponent set entering that step.
pub(crate) fn probe_support(
    instance: &ShorInstance,
    orbit: &[u64],
    entering: &[u64],
    shift: u64,
) -> SupportSet {
    let r = instance.period();
    let top = 1u64 << instance.n;
    let strings = entering
        .iter()
        .map(|&j| orbit[j as usize])
        .chain(entering.iter().map(|&j| top | orbit[((j + shift) % r) as usize]));
    SupportSet::new(instance.num_qubits, strings).expect("probe strings fit in L bits")
}

/// n-bit plateau support: the orbit of 1 under `a^(2^k)`.
pub(crate) fn plateau_support(instance: &ShorInstance, orbit: &[u64]) -> SupportSet {
    let step = 1usize << instance.decomposition.k;
    SupportSet::new(instance.n, orbit.iter().step_by(step).copied()).expect("register fits in n bits")
}

/// Analytic magic at every step of `instance`.
pub fn m2_curve_analytic(instance: &ShorInstance, mode: LambdaMode) -> Result<MagicCurve, MagicError> {
    let dec = instance.decomposition;
    let mut entries = Vec::with_capacity(instance.t as usize);
    let needs_supports = mode == LambdaMode::Exact;
    let orbit = if needs_supports { orbit_values(instance) } else { Vec::new() };
    let mut sets = ExponentSets::new(dec.r);
    let mut plateau_lambda: Option<(u64, f64)> = None;
    for tau in 1..=instance.t {
        let schedule = d_schedule(&dec, instance.t, tau, instance.num_qubits)?;
        let shift = pow2_mod(instance.t - tau, dec.r);
        let (d, lambda) = match mode {
            LambdaMode::Closed => (schedule.d, lambda_closed(schedule.d, schedule.l_eff)),
            LambdaMode::Exact if schedule.regime.is_plateau() => *plateau_lambda.get_or_insert_with(|| {
                let support = plateau_support(instance, &orbit);
                (support.len() as u64, lambda_exact(&support) as f64)
            }),
            LambdaMode::Exact => {
                let support = probe_support(instance, &orbit, sets.members(), shift);
                (support.len() as u64, lambda_exact(&support) as f64)
            }
        };
        if needs_supports {
            sets.absorb(shift);
        }
        entries.push(CurvePoint {
            tau,
            d,
            l_eff: schedule.l_eff,
            lambda,
            m2_analytic: m2_structured(d, lambda)?,
            m2_exact: None,
            regime: schedule.regime,
        });
    }
    Ok(MagicCurve { instance: *instance, mode, entries })
}

fn pow2_mod(e: u32, m: u64) -> u64 {
    crate::numtheory::mod_pow(2, u64::from(e), m)
}

/// Analytic magic at the last step only; avoids building the whole curve.
pub fn m2_final_analytic(instance: &ShorInstance, mode: LambdaMode) -> Result<CurvePoint, MagicError> {
    let dec = instance.decomposition;
    let t = instance.t;
    let schedule = d_schedule(&dec, t, t, instance.num_qubits)?;
    let (d, lambda) = match mode {
        LambdaMode::Closed => (schedule.d, lambda_closed(schedule.d, schedule.l_eff)),
        LambdaMode::Exact => {
            let orbit = orbit_values(instance);
            let support = if schedule.regime.is_plateau() {
                plateau_support(instance, &orbit)
            } else {
                // exponent set entering the last step: multiples of 2 below 2^t, mod r
                let mut sets = ExponentSets::new(dec.r);
                for tau in 1..t {
                    sets.absorb(pow2_mod(t - tau, dec.r));
                }
                probe_support(instance, &orbit, sets.members(), 1 % dec.r)
            };
            (support.len() as u64, lambda_exact(&support) as f64)
        }
    };
    Ok(CurvePoint {
        tau: t,
        d,
        l_eff: schedule.l_eff,
        lambda,
        m2_analytic: m2_structured(d, lambda)?,
        m2_exact: None,
        regime: schedule.regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_two_curve_is_flat_zero() {
        for (n, a) in [(15u64, 4u64), (15, 14), (21, 20)] {
            let inst = ShorInstance::new(n, a).unwrap();
            for mode in [LambdaMode::Exact, LambdaMode::Closed] {
                let curve = m2_curve_analytic(&inst, mode).unwrap();
                assert!(curve.entries.iter().all(|p| p.m2_analytic == 0.0));
            }
        }
    }

    #[test]
    fn exact_supports_follow_schedule() {
        for (n, a) in [(21u64, 2u64), (33, 5), (91, 3), (143, 2), (18923, 2)] {
            let inst = ShorInstance::new(n, a).unwrap();
            let curve = m2_curve_analytic(&inst, LambdaMode::Exact).unwrap();
            for p in &curve.entries {
                let s = d_schedule(&inst.decomposition, inst.t, p.tau, inst.num_qubits).unwrap();
                assert_eq!(p.d, s.d, "N={n} a={a} tau={}", p.tau);
            }
            let last = m2_final_analytic(&inst, LambdaMode::Exact).unwrap();
            assert_eq!(&last, curve.final_point());
        }
    }

    #[test]
    fn odd_period_has_no_late_rise() {
        // 9^3 = 729 = 8 * 91 + 1
        let inst = ShorInstance::new(91, 9).unwrap();
        assert_eq!(inst.decomposition.k, 0);
        let curve = m2_curve_analytic(&inst, LambdaMode::Exact).unwrap();
        assert!(curve.entries.iter().all(|p| p.regime != Regime::Late));
    }
}
