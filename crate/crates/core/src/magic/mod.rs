//! Non-stabilizerness: exact stabilizer Renyi entropies and the analytic
//! structured-superposition model. All entropies are in nats.

mod curve;
mod lambda;
mod model;
mod sre;
mod support;

use thiserror::Error;

pub use curve::{m2_curve_analytic, m2_final_analytic, CurvePoint, LambdaMode, MagicCurve};
pub use lambda::{lambda_closed, lambda_exact};
pub use model::{
    d_schedule, haar_average_m2, m2_final_asymptotes, m2_structured, structured_state_sample,
    MagicModelInput, Regime, ScheduleEntry, PLATEAU_TRANSIENT_STEPS,
};
pub use sre::{
    sre_bruteforce, sre_sparse_exact, sre_sparse_exact_bounded, DEFAULT_DIFFERENCE_BOUND,
    MAX_BRUTEFORCE_QUBITS,
};
pub use support::SupportSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MagicError {
    #[error("{qubits} qubits exceed the limit of {limit}")]
    TooManyQubits { qubits: u32, limit: u32 },
    #[error("support has more than {limit} distinct pairwise differences")]
    DifferenceSetTooLarge { limit: usize },
    #[error("bit string {string:#x} does not fit in {width} bits")]
    StringTooWide { string: u64, width: u32 },
    #[error("geometric term must be non-negative, got {0}")]
    NegativeLambda(f64),
    #[error("empty support")]
    EmptySupport,
    #[error("step {tau} outside [1, {t}]")]
    StepOutOfRange { tau: u32, t: u32 },
}
