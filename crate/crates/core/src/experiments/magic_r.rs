use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rng, ExperimentError};
use crate::magic::{m2_final_analytic, m2_final_asymptotes, LambdaMode};
use crate::numtheory::{order_spectrum, DEFAULT_SPECTRUM_BOUND};
use crate::simulator::ShorInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MagicVsRConfig {
    pub modulus: u64,
    pub samples_per_r: usize,
    pub seed: u64,
}

impl Default for MagicVsRConfig {
    fn default() -> Self {
        Self { modulus: 18923, samples_per_r: 10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagicVsRRow {
    pub r: u64,
    pub a: u64,
    #[serde(rename = "m2_final_exactLambda")]
    pub m2_final_exact_lambda: f64,
    #[serde(rename = "m2_final_closedLambda")]
    pub m2_final_closed_lambda: f64,
    pub m2_small_r_asymptote: f64,
    pub m2_saturation_asymptote: f64,
    pub m2_ratio: f64,
    pub d: u64,
    pub lambda: f64,
    pub epsilon: u32,
    pub num_qubits: u32,
}

/// Final-step magic for up to `samples_per_r` random bases of every order.
pub fn exp_magic_vs_r(config: &MagicVsRConfig) -> Result<Vec<MagicVsRRow>, ExperimentError> {
    let spectrum = order_spectrum(config.modulus, DEFAULT_SPECTRUM_BOUND)?;
    let mut items = Vec::new();
    for (r, units) in spectrum.units_by_order() {
        let mut stream = rng::stream(config.seed, "magic-vs-r", &[r]);
        for a in rng::sample_without_replacement(&units, config.samples_per_r, &mut stream) {
            items.push((r, a));
        }
    }
    items
        .par_iter()
        .map(|&(r, a)| {
            let instance = ShorInstance::new(config.modulus, a)?;
            let exact = m2_final_analytic(&instance, LambdaMode::Exact)?;
            let closed = m2_final_analytic(&instance, LambdaMode::Closed)?;
            let eps = instance.decomposition.epsilon;
            let (small, saturation) = m2_final_asymptotes(r, instance.num_qubits, eps);
            Ok(MagicVsRRow {
                r,
                a,
                m2_final_exact_lambda: exact.m2_analytic,
                m2_final_closed_lambda: closed.m2_analytic,
                m2_small_r_asymptote: small,
                m2_saturation_asymptote: saturation,
                m2_ratio: exact.m2_analytic / (f64::from(instance.num_qubits) * LN_2),
                d: exact.d,
                lambda: exact.lambda,
                epsilon: eps,
                num_qubits: instance.num_qubits,
            })
        })
        .collect()
}
