//! Analytic magic of uniform-magnitude, random-phase superpositions and the
//! support schedule of the order-finding circuit.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MagicError, SupportSet};
use crate::numtheory::PeriodDecomposition;
use crate::simulator::SparseState;

/// Steps after the ramp during which the plateau state is still settling.
pub const PLATEAU_TRANSIENT_STEPS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// support doubles every step, `tau <= tau*`
    Ramp,
    /// first steps after the ramp; the model is only qualitative here
    PlateauTransient,
    /// QFT qubit factored out, register holds `r_odd` strings
    Plateau,
    /// support doubles again in the final `k` steps
    Late,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Ramp => "ramp",
            Regime::PlateauTransient => "plateau-transient",
            Regime::Plateau => "plateau",
            Regime::Late => "late",
        }
    }

    pub fn is_plateau(self) -> bool {
        matches!(self, Regime::Plateau | Regime::PlateauTransient)
    }
}

/// Inputs of the structured-superposition formula at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagicModelInput {
    pub d: u64,
    /// qubits the support lives on: `L - 1` on the plateau, `L` otherwise
    pub l_eff: u32,
    pub lambda: f64,
    pub regime: Regime,
}

/// Support size and effective width predicted for step `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub d: u64,
    pub l_eff: u32,
    pub regime: Regime,
}

/// Piecewise support schedule: `2^tau` up to `tau*`, `r_odd` until `t - k`,
/// then `r / 2^(t - tau)`.
///
/// When `t - k < tau*` the ramp is cut short by the late regime; the late
/// branch then reports `min(2^tau, r / 2^(t - tau))`, which is the actual
/// probe support size.
pub fn d_schedule(
    decomposition: &PeriodDecomposition,
    t: u32,
    tau: u32,
    num_qubits: u32,
) -> Result<ScheduleEntry, MagicError> {
    if tau == 0 || tau > t {
        return Err(MagicError::StepOutOfRange { tau, t });
    }
    let PeriodDecomposition { r, k, r_odd, tau_star, .. } = *decomposition;
    let late_start = t.saturating_sub(k);
    let entry = if tau > late_start {
        let doubled = 1u64.checked_shl(tau).unwrap_or(u64::MAX);
        ScheduleEntry {
            d: doubled.min(r >> (t - tau)),
            l_eff: num_qubits,
            regime: Regime::Late,
        }
    } else if tau <= tau_star {
        ScheduleEntry { d: 1 << tau, l_eff: num_qubits, regime: Regime::Ramp }
    } else {
        let regime = if tau < tau_star + PLATEAU_TRANSIENT_STEPS {
            Regime::PlateauTransient
        } else {
            Regime::Plateau
        };
        ScheduleEntry { d: r_odd, l_eff: num_qubits - 1, regime }
    };
    Ok(entry)
}

/// `4 log D - log(4 Lambda + 6 D^2 - 5 D)`, and 0 for `D <= 2`.
pub fn m2_structured(d: u64, lambda: f64) -> Result<f64, MagicError> {
    if d == 0 {
        return Err(MagicError::EmptySupport);
    }
    if lambda < 0.0 || lambda.is_nan() {
        return Err(MagicError::NegativeLambda(lambda));
    }
    if d <= 2 {
        return Ok(0.0);
    }
    let d = d as f64;
    Ok(4.0 * d.ln() - (4.0 * lambda + 6.0 * d * d - 5.0 * d).ln())
}

/// Final-step magic laws: `log(r^3 / (6r - 5))` for small periods and
/// `(L - 2 - eps) log 2 - 3 * 2^(L - eps - 1) / r^2` at saturation.
pub fn m2_final_asymptotes(r: u64, num_qubits: u32, epsilon: u32) -> (f64, f64) {
    let rf = r as f64;
    let small = (rf.powi(3) / (6.0 * rf - 5.0)).ln();
    let width = num_qubits as f64 - epsilon as f64;
    let saturation = (width - 2.0) * LN_2 - 3.0 * 2f64.powf(width - 1.0) / (rf * rf);
    (small, saturation)
}

/// Annealed Haar average `-log E[2^-L sum_P <P>^4] = log((2^L + 3) / 4)`.
pub fn haar_average_m2(num_qubits: u32) -> f64 {
    assert!(num_qubits >= 1);
    ((2f64.powi(num_qubits as i32) + 3.0) / 4.0).ln()
}

/// Uniform-magnitude superposition over `support` with i.i.d. uniform phases.
pub fn structured_state_sample(support: &SupportSet, seed: u64) -> Result<SparseState, MagicError> {
    if support.is_empty() {
        return Err(MagicError::EmptySupport);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = 1.0 / (support.len() as f64).sqrt();
    let entries: Vec<(u64, Complex64)> = support
        .strings()
        .iter()
        .map(|&m| (m, Complex64::from_polar(norm, rng.gen_range(0.0..2.0 * PI))))
        .collect();
    Ok(SparseState::from_entries(support.width(), entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::split_period;

    #[test]
    fn structured_formula_values() {
        assert_eq!(m2_structured(2, 1e9).unwrap(), 0.0);
        assert_eq!(m2_structured(1, 0.0).unwrap(), 0.0);
        let v = m2_structured(4, 24.0).unwrap();
        assert!((v - (256.0f64 / 172.0).ln()).abs() < 1e-12);
        assert!((v - 0.3977).abs() < 1e-4);
        for r in [3u64, 10, 100, 1000] {
            let rf = r as f64;
            let expected = (rf.powi(3) / (6.0 * rf - 5.0)).ln();
            assert!((m2_structured(r, 0.0).unwrap() - expected).abs() < 1e-12);
        }
        assert!(matches!(m2_structured(5, -1.0), Err(MagicError::NegativeLambda(_))));
        assert!(matches!(m2_structured(0, 0.0), Err(MagicError::EmptySupport)));
    }

    #[test]
    fn schedule_for_period_1036() {
        let dec = split_period(1036);
        let at = |tau| d_schedule(&dec, 31, tau, 16).unwrap();
        assert_eq!(at(5), ScheduleEntry { d: 32, l_eff: 16, regime: Regime::Ramp });
        assert_eq!(at(9), ScheduleEntry { d: 512, l_eff: 16, regime: Regime::Ramp });
        assert_eq!(at(10).regime, Regime::PlateauTransient);
        assert_eq!(at(20), ScheduleEntry { d: 259, l_eff: 15, regime: Regime::Plateau });
        assert_eq!(at(29).regime, Regime::Plateau);
        assert_eq!(at(30), ScheduleEntry { d: 518, l_eff: 16, regime: Regime::Late });
        assert_eq!(at(31), ScheduleEntry { d: 1036, l_eff: 16, regime: Regime::Late });
        assert!(d_schedule(&dec, 31, 0, 16).is_err());
        assert!(d_schedule(&dec, 31, 32, 16).is_err());
    }

    #[test]
    fn truncated_schedule() {
        // r = 1036 with only 6 steps: late regime starts at tau = 5
        let dec = split_period(1036);
        let d: Vec<u64> = (1..=6).map(|tau| d_schedule(&dec, 6, tau, 16).unwrap().d).collect();
        assert_eq!(d, vec![2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn asymptote_values() {
        let (small, _) = m2_final_asymptotes(3, 16, 1);
        assert!((small - (27.0f64 / 13.0).ln()).abs() < 1e-12);
        assert!((small - 0.7309).abs() < 1e-4);
        let (small2, _) = m2_final_asymptotes(2, 16, 0);
        assert!((small2 - (8.0f64 / 7.0).ln()).abs() < 1e-12);
        let (_, sat) = m2_final_asymptotes(1 << 30, 16, 0);
        assert!(sat < 14.0 * LN_2 && sat > 14.0 * LN_2 - 1e-6);
    }

    #[test]
    fn haar_values() {
        assert!((haar_average_m2(1) - (2.0f64 / 1.6).ln()).abs() < 1e-12);
        let l = 40;
        assert!((haar_average_m2(l) - (l as f64 * LN_2 - 4f64.ln())).abs() < 1e-9);
    }
}
