//! JSON-lines step traces: one `{"tau", "outcome", "probability", "support_size"}`
//! object per line, in step order.

use std::io::{BufRead, Write};

use serde::Deserialize;

use super::{SimError, StepSummary, StepTrace};

pub fn write_trace_jsonl<W: Write>(mut out: W, steps: &[StepTrace]) -> Result<(), SimError> {
    for s in steps {
        serde_json::to_writer(&mut out, &StepSummary::from(s))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct Line {
    tau: u32,
    outcome: u8,
    probability: f64,
    support_size: usize,
}

pub fn read_trace_jsonl<R: BufRead>(input: R) -> Result<Vec<StepSummary>, SimError> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let l: Line = serde_json::from_str(&line)?;
        out.push(StepSummary {
            tau: l.tau,
            outcome: l.outcome,
            probability: l.probability,
            support_size: l.support_size,
        });
    }
    Ok(out)
}
