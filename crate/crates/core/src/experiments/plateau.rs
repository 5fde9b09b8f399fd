use serde::{Deserialize, Serialize};

use super::{estimate_p_succ, rng, select_coprimes, ExperimentError};
use crate::numtheory::{ceil_log2, order_spectrum, DEFAULT_SPECTRUM_BOUND};
use crate::simulator::ShorInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlateauConfig {
    pub modulus: u64,
    pub coprimes: Vec<u64>,
    /// one random base is drawn for each of these orders
    pub periods: Vec<u64>,
    /// smallest step count tried in the downward sweep
    pub t_min: u32,
    /// defaults to the instance's own `2n + 1`
    pub t_max: Option<u32>,
    pub reps: u64,
    pub seed: u64,
}

impl Default for PlateauConfig {
    fn default() -> Self {
        Self {
            modulus: 18923,
            coprimes: Vec::new(),
            periods: Vec::new(),
            t_min: 2,
            t_max: None,
            reps: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauPair {
    pub a: u64,
    pub r: u64,
    pub t_max: u32,
    pub delta_tau_m2: i64,
    pub delta_tau_psucc: i64,
    /// largest t with no success; empty when every t down to `t_min` succeeded
    pub t_zero: Option<u32>,
    /// one-sided 95% upper bound on p_succ at `t_zero`
    pub p_zero_upper: Option<f64>,
    pub p_succ_at_t_max: f64,
    pub reps: u64,
}

impl PlateauPair {
    /// True when the sweep never reached a zero-success step.
    pub fn censored(&self) -> bool {
        self.t_zero.is_none()
    }
}

/// Sweeps `t` downward from `t_max` until a step count yields no success.
pub fn exp_plateau(config: &PlateauConfig) -> Result<Vec<PlateauPair>, ExperimentError> {
    let spectrum = order_spectrum(config.modulus, DEFAULT_SPECTRUM_BOUND)?;
    let bases = select_coprimes(&spectrum, &config.coprimes, &config.periods, config.seed)?;
    if config.t_min < 1 {
        return Err(ExperimentError::InvalidConfig("t_min must be at least 1".into()));
    }
    let mut pairs = Vec::with_capacity(bases.len());
    for (r, a) in bases {
        let base = ShorInstance::new(config.modulus, a)?;
        let t_max = config.t_max.unwrap_or(base.t);
        if t_max < config.t_min || t_max > base.max_steps() {
            return Err(ExperimentError::InvalidConfig(format!(
                "t range [{}, {t_max}] is not inside [1, {}]",
                config.t_min,
                base.max_steps()
            )));
        }
        let mut t_zero = None;
        let mut p_zero_upper = None;
        let mut p_at_max = 0.0;
        for t in (config.t_min..=t_max).rev() {
            let instance = base.with_steps(t)?;
            let seed = rng::derive_seed(config.seed, "plateau", &[a, u64::from(t)]);
            let estimate = estimate_p_succ(&instance, config.reps, seed)?;
            if t == t_max {
                p_at_max = estimate.p;
            }
            if estimate.successes == 0 {
                t_zero = Some(t);
                p_zero_upper = Some(estimate.upper_bound_95());
                break;
            }
        }
        let floor = t_zero.map_or(i64::from(config.t_min) - 1, i64::from);
        pairs.push(PlateauPair {
            a,
            r,
            t_max,
            delta_tau_m2: i64::from(t_max) - i64::from(ceil_log2(r)),
            delta_tau_psucc: i64::from(t_max) - floor,
            t_zero,
            p_zero_upper,
            p_succ_at_t_max: p_at_max,
            reps: config.reps,
        });
    }
    Ok(pairs)
}
