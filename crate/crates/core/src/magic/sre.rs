//! Second stabilizer Renyi entropy of pure states, in nats.
//!
//! Pauli strings are written `P_{z,x} = i^{-z.x} Z^z X^x`, for which
//! `<P_{z,x}> = i^{-z.x} sum_m conj(a_m) a_{m^x} (-1)^{m.z}`. For a fixed
//! `x` the `z`-dependence is a Walsh-Hadamard transform of
//! `f_x(m) = conj(a_m) a_{m^x}`, and Parseval turns the fourth moment into
//! an autocorrelation: `2^-L sum_z <P_{z,x}>^4 = sum_d |sum_m f_x(m) conj(f_x(m^d))|^2`.

use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};

use super::MagicError;
use crate::simulator::SparseState;

pub const MAX_BRUTEFORCE_QUBITS: u32 = 12;
/// Default cap on the number of distinct XOR differences of the support.
pub const DEFAULT_DIFFERENCE_BOUND: usize = 4096;
/// Dense Walsh-Hadamard evaluation is only considered up to this width.
const MAX_TRANSFORM_WIDTH: u32 = 22;

fn to_entropy(pauli_moment: f64) -> f64 {
    (-pauli_moment.ln()).max(0.0)
}

/// Direct sum over all `4^L` Pauli strings.
pub fn sre_bruteforce(state: &SparseState) -> Result<f64, MagicError> {
    let l = state.num_qubits();
    if l > MAX_BRUTEFORCE_QUBITS {
        return Err(MagicError::TooManyQubits { qubits: l, limit: MAX_BRUTEFORCE_QUBITS });
    }
    let dim = 1usize << l;
    let mut dense = vec![Complex64::default(); dim];
    for (k, v) in state.iter() {
        dense[k as usize] = v;
    }
    let support: Vec<(usize, Complex64)> = state.iter().map(|(k, v)| (k as usize, v)).collect();
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let mut total = 0.0;
    let mut terms: Vec<(usize, Complex64)> = Vec::with_capacity(support.len());
    for x in 0..dim {
        terms.clear();
        terms.extend(
            support
                .iter()
                .filter(|&&(m, _)| dense[m ^ x] != Complex64::default())
                .map(|&(m, a)| (m, a.conj() * dense[m ^ x])),
        );
        if terms.is_empty() {
            // every <P_{z,x}> vanishes
            continue;
        }
        for z in 0..dim {
            let mut acc = Complex64::default();
            for &(m, f) in &terms {
                if (m & z).count_ones() % 2 == 0 {
                    acc += f;
                } else {
                    acc -= f;
                }
            }
            let expectation = phases[((x & z).count_ones() % 4) as usize] * acc;
            total += expectation.norm_sqr().powi(2);
        }
    }
    Ok(to_entropy(total / dim as f64))
}

/// Exact SRE from the support's XOR structure, with the default difference bound.
pub fn sre_sparse_exact(state: &SparseState) -> Result<f64, MagicError> {
    sre_sparse_exact_bounded(state, DEFAULT_DIFFERENCE_BOUND)
}

/// Exact SRE; errors when the support has more than `difference_bound`
/// distinct pairwise XORs.
pub fn sre_sparse_exact_bounded(state: &SparseState, difference_bound: usize) -> Result<f64, MagicError> {
    let entries: Vec<(u64, Complex64)> = state.iter().collect();
    let index: FxHashMap<u64, Complex64> = entries.iter().copied().collect();

    let mut diffs = FxHashSet::default();
    for (i, &(m, _)) in entries.iter().enumerate() {
        for &(n, _) in &entries[i..] {
            diffs.insert(m ^ n);
            if diffs.len() > difference_bound {
                return Err(MagicError::DifferenceSetTooLarge { limit: difference_bound });
            }
        }
    }
    let mut diffs: Vec<u64> = diffs.into_iter().collect();
    diffs.sort_unstable();

    let width = state.num_qubits();
    let transform_cost = (width as usize).saturating_mul(1usize << width.min(MAX_TRANSFORM_WIDTH));
    let mut f: Vec<(u64, Complex64)> = Vec::new();
    let mut correlation: FxHashMap<u64, Complex64> = FxHashMap::default();
    let mut dense: Vec<Complex64> = Vec::new();
    let mut total = 0.0;
    for &x in &diffs {
        f.clear();
        f.extend(
            entries
                .iter()
                .filter_map(|&(m, a)| index.get(&(m ^ x)).map(|&b| (m, a.conj() * b))),
        );
        let pair_cost = f.len() * f.len();
        total += if width <= MAX_TRANSFORM_WIDTH && transform_cost < pair_cost {
            moment_by_transform(&f, width, &mut dense)
        } else {
            moment_by_correlation(&f, &mut correlation)
        };
    }
    Ok(to_entropy(total))
}

/// `sum_d |sum_m f(m) conj(f(m^d))|^2`, accumulated over all pairs.
fn moment_by_correlation(f: &[(u64, Complex64)], acc: &mut FxHashMap<u64, Complex64>) -> f64 {
    acc.clear();
    for &(m, fm) in f {
        for &(n, fn_) in f {
            *acc.entry(m ^ n).or_default() += fm * fn_.conj();
        }
    }
    let mut keys: Vec<u64> = acc.keys().copied().collect();
    keys.sort_unstable();
    keys.iter().map(|d| acc[d].norm_sqr()).sum()
}

/// `2^-W sum_z |F(z)|^4` with `F` the Walsh-Hadamard transform of `f`.
fn moment_by_transform(f: &[(u64, Complex64)], width: u32, buf: &mut Vec<Complex64>) -> f64 {
    let dim = 1usize << width;
    buf.clear();
    buf.resize(dim, Complex64::default());
    for &(m, v) in f {
        buf[m as usize] = v;
    }
    walsh_hadamard_in_place(buf);
    buf.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() / dim as f64
}

/// Unnormalised fast Walsh-Hadamard transform.
pub(crate) fn walsh_hadamard_in_place(v: &mut [Complex64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn t_state() -> SparseState {
        SparseState::from_entries(
            1,
            [
                (0, Complex64::new(FRAC_1_SQRT_2, 0.0)),
                (1, Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)),
            ],
        )
    }

    #[test]
    fn basis_states_are_free() {
        for k in [0u64, 5, 77] {
            let s = SparseState::basis(7, k);
            assert!(sre_bruteforce(&s).unwrap().abs() < 1e-14);
            assert!(sre_sparse_exact(&s).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn single_qubit_magic_state() {
        // <X> = <Y> = 1/sqrt 2, <Z> = 0: (1 + 1/4 + 1/4) / 2 = 3/4
        let expected = -(0.75f64).ln();
        assert!((sre_bruteforce(&t_state()).unwrap() - expected).abs() < 1e-12);
        assert!((sre_sparse_exact(&t_state()).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn additive_on_products() {
        let two = t_state().tensor(&t_state());
        let expected = -2.0 * (0.75f64).ln();
        assert!((sre_bruteforce(&two).unwrap() - expected).abs() < 1e-12);
        assert!((sre_sparse_exact(&two).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_plus_state_is_free() {
        let l = 6;
        let amp = Complex64::new((1.0 / 64.0f64).sqrt(), 0.0);
        let s = SparseState::from_entries(l, (0..64).map(|k| (k, amp)));
        assert!(sre_sparse_exact(&s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn difference_bound_is_enforced() {
        let amp = Complex64::new(0.125, 0.0);
        let s = SparseState::from_entries(12, (0..64).map(|k| (k * 61, amp)));
        assert!(matches!(
            sre_sparse_exact_bounded(&s, 16),
            Err(MagicError::DifferenceSetTooLarge { limit: 16 })
        ));
        assert!(matches!(
            sre_bruteforce(&SparseState::basis(13, 0)),
            Err(MagicError::TooManyQubits { .. })
        ));
    }

    #[test]
    fn transform_and_correlation_agree() {
        let f: Vec<(u64, Complex64)> = (0..20u64)
            .map(|i| ((i * 37) % 64, Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())))
            .collect();
        let mut map = FxHashMap::default();
        let mut buf = Vec::new();
        let a = moment_by_correlation(&f, &mut map);
        let b = moment_by_transform(&f, 6, &mut buf);
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
}
