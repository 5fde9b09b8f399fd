use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rng, select_coprimes, ExperimentError};
use crate::magic::{haar_average_m2, m2_curve_analytic, sre_sparse_exact, LambdaMode, Regime, MAX_BRUTEFORCE_QUBITS};
use crate::numtheory::{order_spectrum, DEFAULT_SPECTRUM_BOUND};
use crate::simulator::{run, ShorInstance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MagicVsTauConfig {
    pub modulus: u64,
    /// explicit bases
    pub coprimes: Vec<u64>,
    /// one random base is drawn for each of these orders
    pub periods: Vec<u64>,
    /// simulated runs averaged per curve when the register is small enough
    pub reps: u64,
    pub steps: Option<u32>,
    pub exact_sre: bool,
    pub seed: u64,
}

impl Default for MagicVsTauConfig {
    fn default() -> Self {
        Self {
            modulus: 15,
            coprimes: Vec::new(),
            periods: Vec::new(),
            reps: 150,
            steps: None,
            exact_sre: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagicVsTauRow {
    pub r: u64,
    pub a: u64,
    pub tau: u32,
    #[serde(rename = "m2_analytic_exactLambda")]
    pub m2_analytic_exact_lambda: f64,
    #[serde(rename = "m2_analytic_closedLambda")]
    pub m2_analytic_closed_lambda: f64,
    #[serde(rename = "m2_exact_if_feasible")]
    pub m2_exact: Option<f64>,
    pub regime: Regime,
    pub d: u64,
    pub num_qubits: u32,
    pub t: u32,
    pub haar_m2: f64,
}

/// Magic along the circuit for each selected base. With neither bases nor
/// periods configured, one base per period of the spectrum is used.
pub fn exp_magic_vs_tau(config: &MagicVsTauConfig) -> Result<Vec<MagicVsTauRow>, ExperimentError> {
    let spectrum = order_spectrum(config.modulus, DEFAULT_SPECTRUM_BOUND)?;
    let all_periods: Vec<u64>;
    let periods = if config.coprimes.is_empty() && config.periods.is_empty() {
        all_periods = spectrum.periods().collect();
        &all_periods
    } else {
        &config.periods
    };
    let bases = select_coprimes(&spectrum, &config.coprimes, periods, config.seed)?;
    let mut rows = Vec::new();
    for (r, a) in bases {
        let mut instance = ShorInstance::new(config.modulus, a)?;
        if let Some(t) = config.steps {
            instance = instance.with_steps(t)?;
        }
        let exact = m2_curve_analytic(&instance, LambdaMode::Exact)?;
        let closed = m2_curve_analytic(&instance, LambdaMode::Closed)?;
        let simulated = if config.exact_sre && instance.num_qubits <= MAX_BRUTEFORCE_QUBITS && config.reps > 0 {
            Some(simulated_curve(&instance, config.reps, rng::derive_seed(config.seed, "magic-tau", &[a]))?)
        } else {
            None
        };
        let haar = haar_average_m2(instance.num_qubits);
        for (i, (e, c)) in exact.entries.iter().zip(&closed.entries).enumerate() {
            rows.push(MagicVsTauRow {
                r,
                a,
                tau: e.tau,
                m2_analytic_exact_lambda: e.m2_analytic,
                m2_analytic_closed_lambda: c.m2_analytic,
                m2_exact: simulated.as_ref().map(|s| s[i]),
                regime: e.regime,
                d: e.d,
                num_qubits: instance.num_qubits,
                t: instance.t,
                haar_m2: haar,
            });
        }
    }
    Ok(rows)
}

/// Probe SRE at every step averaged over `reps` seeded runs.
fn simulated_curve(instance: &ShorInstance, reps: u64, seed: u64) -> Result<Vec<f64>, ExperimentError> {
    let per_run: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let (_, traces) = run(instance, rng::derive_seed(seed, "run", &[i]), true)?;
            traces
                .expect("probe traces requested")
                .iter()
                .map(|s| sre_sparse_exact(&s.state_at_probe).map_err(ExperimentError::from))
                .collect()
        })
        .collect::<Result<_, ExperimentError>>()?;
    let mut sums = vec![0.0; instance.t as usize];
    for curve in &per_run {
        for (acc, v) in sums.iter_mut().zip(curve) {
            *acc += v;
        }
    }
    Ok(sums.into_iter().map(|s| s / reps as f64).collect())
}
