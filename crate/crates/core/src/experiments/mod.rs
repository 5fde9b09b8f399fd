//! Seeded batch runners producing the CSV datasets, plus their manifests.

mod magic_r;
mod magic_tau;
mod output;
mod plateau;
pub mod rng;
mod stats;
mod success;

use thiserror::Error;

use crate::magic::MagicError;
use crate::numtheory::{NumTheoryError, OrderSpectrum};
use crate::simulator::{OrbitSampler, ShorInstance, SimError};

pub use magic_r::{exp_magic_vs_r, MagicVsRConfig, MagicVsRRow};
pub use magic_tau::{exp_magic_vs_tau, MagicVsTauConfig, MagicVsTauRow};
pub use output::{write_csv, write_experiment, Manifest, Timing, CODE_VERSION, MANIFEST_SCHEMA};
pub use plateau::{exp_plateau, PlateauConfig, PlateauPair};
pub use stats::{least_squares_slope, pearson, wilson_interval, BinomialEstimate};
pub use success::{exp_success_rate, success_slope, SuccessRateConfig, SuccessStats};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "SHOR_MAGIC_THREADS";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{0}")]
    NumTheory(#[from] NumTheoryError),
    #[error("{0}")]
    Simulator(#[from] SimError),
    #[error("{0}")]
    Magic(#[from] MagicError),
    #[error("no unit modulo {modulus} has order {period}")]
    NoCoprimeWithPeriod { modulus: u64, period: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl ExperimentError {
    /// Name of the module the failure originated in.
    pub fn module(&self) -> &'static str {
        match self {
            Self::NumTheory(_) => "numtheory",
            Self::Simulator(_) => "simulator",
            Self::Magic(_) => "magic",
            _ => "experiments",
        }
    }
}

/// Installs the global thread pool from [`THREADS_ENV`] if it is set.
/// Results never depend on the thread count.
pub fn configure_threads() -> Result<(), ExperimentError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| ExperimentError::InvalidConfig(format!("{THREADS_ENV}={value:?} is not a count")))?;
    // a pool may already exist, e.g. inside a test harness
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Success probability of `instance` from `reps` Born-sampled runs. Run
/// `i` uses the sub-stream `run[i]` of `seed`.
pub fn estimate_p_succ(instance: &ShorInstance, reps: u64, seed: u64) -> Result<BinomialEstimate, ExperimentError> {
    use rayon::prelude::*;
    if reps == 0 {
        return Err(ExperimentError::InvalidConfig("reps must be at least 1".into()));
    }
    let successes = (0..reps)
        .into_par_iter()
        .map_init(
            || OrbitSampler::new(*instance),
            |sampler, i| {
                let record = sampler.run(rng::derive_seed(seed, "run", &[i]))?;
                debug_assert!(!record.success || record.found_period == Some(instance.period()));
                Ok(u64::from(record.success))
            },
        )
        .try_reduce(|| 0, |x, y| Ok(x + y))
        .map_err(|e: SimError| ExperimentError::from(e))?;
    Ok(BinomialEstimate::new(successes, reps))
}

/// One coprime per requested period, drawn uniformly from the units of
/// that order, merged with explicit coprimes. Sorted by `(r, a)`.
pub(crate) fn select_coprimes(
    spectrum: &OrderSpectrum,
    explicit: &[u64],
    periods: &[u64],
    seed: u64,
) -> Result<Vec<(u64, u64)>, ExperimentError> {
    let modulus = spectrum.modulus;
    let mut chosen = Vec::new();
    for &a in explicit {
        let r = crate::numtheory::multiplicative_order(a, modulus)?;
        chosen.push((r, a));
    }
    if !periods.is_empty() {
        let groups = spectrum.units_by_order();
        for &r in periods {
            let units = groups
                .get(&r)
                .ok_or(ExperimentError::NoCoprimeWithPeriod { modulus, period: r })?;
            let mut stream = rng::stream(seed, "coprime-for-period", &[r]);
            chosen.extend(rng::sample_without_replacement(units, 1, &mut stream).into_iter().map(|a| (r, a)));
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    Ok(chosen)
}
