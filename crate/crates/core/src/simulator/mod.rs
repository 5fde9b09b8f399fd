//! Exact simulation of semiclassical order finding with a single reused
//! QFT qubit. The QFT qubit is bit `n`; the low `n` bits hold the register.

mod circuit;
mod dense;
mod instance;
mod orbit;
mod state;
mod trace;

use thiserror::Error;

pub use circuit::{
    controlled_modmul, feedback_phase, init_state, phase_numerator, run, run_with, step,
    BornSampler, ForcedOutcomes, OutcomeSampler, RunRecord, StepSummary, StepTrace,
    MIN_BRANCH_WEIGHT,
};
pub use dense::{dense_reference, dense_run_with, DenseRun, MAX_DENSE_QUBITS};
pub use instance::{ShorInstance, MAX_STEPS};
pub use orbit::OrbitSampler;
pub use state::{SparseState, PRUNE_THRESHOLD};
pub use trace::{read_trace_jsonl, write_trace_jsonl};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("register value {value} is not below the modulus {modulus}")]
    CorruptRegister { value: u64, modulus: u64 },
    #[error("measurement at step {tau} selected a branch of weight {weight:e}")]
    NormLoss { tau: u32, weight: f64 },
    #[error("step {tau} outside [1, {t}]")]
    StepOutOfRange { tau: u32, t: u32 },
    #[error("forced outcome list ended before step {tau}")]
    OutcomesExhausted { tau: u32 },
    #[error("{qubits} qubits exceed the dense limit of {limit}")]
    TooManyQubits { qubits: u32, limit: u32 },
    #[error("trace i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace format: {0}")]
    Format(#[from] serde_json::Error),
}
