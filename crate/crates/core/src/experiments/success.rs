use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate_p_succ, least_squares_slope, rng, BinomialEstimate, ExperimentError};
use crate::magic::{m2_final_analytic, LambdaMode};
use crate::numtheory::{order_spectrum, DEFAULT_SPECTRUM_BOUND};
use crate::simulator::ShorInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuccessRateConfig {
    pub moduli: Vec<u64>,
    pub reps_per_a: u64,
    pub coprimes_per_r: usize,
    pub seed: u64,
}

impl Default for SuccessRateConfig {
    fn default() -> Self {
        Self {
            moduli: vec![143, 323, 667, 1147, 2491, 3127],
            reps_per_a: 100,
            coprimes_per_r: 100,
            seed: 0,
        }
    }
}

/// Success statistics of one order `r` modulo `modulus`, pooled over the
/// sampled bases (`a` is the smallest of them).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessStats {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub num_qubits: u32,
    pub r: u64,
    pub a: u64,
    pub coprimes: usize,
    pub r_over_n: f64,
    pub g: f64,
    pub runs: u64,
    pub successes: u64,
    pub p_succ: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "S_norm")]
    pub s_norm: f64,
    pub m2_final: f64,
    pub m2_ratio: f64,
}

pub fn exp_success_rate(config: &SuccessRateConfig) -> Result<Vec<SuccessStats>, ExperimentError> {
    let mut moduli = config.moduli.clone();
    moduli.sort_unstable();
    moduli.dedup();
    let mut all = Vec::new();
    for modulus in moduli {
        all.extend(success_for_modulus(modulus, config)?);
    }
    Ok(all)
}

fn success_for_modulus(modulus: u64, config: &SuccessRateConfig) -> Result<Vec<SuccessStats>, ExperimentError> {
    let spectrum = order_spectrum(modulus, DEFAULT_SPECTRUM_BOUND)?;
    let groups = spectrum.units_by_order();
    let mut rows = Vec::with_capacity(groups.len());
    for (&r, units) in &groups {
        let mut stream = rng::stream(config.seed, "success-coprimes", &[modulus, r]);
        let bases = rng::sample_without_replacement(units, config.coprimes_per_r.max(1), &mut stream);
        let per_base = bases
            .par_iter()
            .map(|&a| {
                let instance = ShorInstance::new(modulus, a)?;
                let seed = rng::derive_seed(config.seed, "success-runs", &[modulus, a]);
                let estimate = estimate_p_succ(&instance, config.reps_per_a, seed)?;
                let m2 = m2_final_analytic(&instance, LambdaMode::Exact)?.m2_analytic;
                Ok((estimate.successes, m2, instance.num_qubits))
            })
            .collect::<Result<Vec<_>, ExperimentError>>()?;
        let successes: u64 = per_base.iter().map(|p| p.0).sum();
        let runs = config.reps_per_a * bases.len() as u64;
        let m2 = per_base.iter().map(|p| p.1).sum::<f64>() / bases.len() as f64;
        let num_qubits = per_base[0].2;
        let estimate = BinomialEstimate::new(successes, runs);
        let g = spectrum.frequency(r);
        rows.push(SuccessStats {
            modulus,
            num_qubits,
            r,
            a: bases[0],
            coprimes: bases.len(),
            r_over_n: r as f64 / modulus as f64,
            g,
            runs,
            successes,
            p_succ: estimate.p,
            ci_low: estimate.ci_low,
            ci_high: estimate.ci_high,
            s: g * estimate.p,
            s_norm: 0.0,
            m2_final: m2,
            m2_ratio: m2 / (f64::from(num_qubits) * LN_2),
        });
    }
    let s_max = rows.iter().map(|r| r.s).fold(0.0, f64::max);
    if s_max > 0.0 {
        for row in &mut rows {
            row.s_norm = row.s / s_max;
        }
    }
    Ok(rows)
}

/// Log-log slope of `S_norm` against `r/N` over the top decade of `r/N`,
/// ignoring rows with `S_norm <= 1e-3`. Expects rows of one modulus.
pub fn success_slope(rows: &[SuccessStats]) -> Option<f64> {
    let top = rows.iter().map(|r| r.r_over_n).fold(0.0, f64::max);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.s_norm > 1e-3 && r.r_over_n >= top / 10.0)
        .map(|r| (r.r_over_n.log10(), r.s_norm.log10()))
        .collect();
    least_squares_slope(&points)
}
