use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

/// Amplitudes with modulus below this are dropped after every gate.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Pure state on `num_qubits` qubits holding only its nonzero amplitudes.
///
/// Basis states are `u64` bit strings with qubit `q` at bit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    num_qubits: u32,
    amplitudes: BTreeMap<u64, Complex64>,
}

impl SparseState {
    pub fn basis(num_qubits: u32, index: u64) -> Self {
        assert!(num_qubits <= 63, "at most 63 qubits");
        assert!(index >> num_qubits == 0, "basis index out of range");
        Self {
            num_qubits,
            amplitudes: BTreeMap::from([(index, Complex64::new(1.0, 0.0))]),
        }
    }

    /// Builds a state from raw entries; duplicate keys are summed and tiny
    /// amplitudes pruned. No normalisation is applied.
    pub fn from_entries(num_qubits: u32, entries: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        assert!(num_qubits <= 63, "at most 63 qubits");
        let mut amplitudes = BTreeMap::new();
        for (k, v) in entries {
            assert!(k >> num_qubits == 0, "basis index out of range");
            *amplitudes.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let mut state = Self { num_qubits, amplitudes };
        state.prune();
        state
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn support_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amplitudes.get(&index).copied().unwrap_or_default()
    }

    /// Entries in ascending bit-string order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.amplitudes.keys().copied()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        assert!(norm > 0.0, "cannot normalise the zero vector");
        for a in self.amplitudes.values_mut() {
            *a /= norm;
        }
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    fn check_qubit(&self, qubit: u32) {
        assert!(qubit < self.num_qubits, "qubit {qubit} out of range");
    }

    /// Rewrites every basis label through `f`, which must be injective.
    pub fn relabel(&mut self, mut f: impl FnMut(u64) -> u64) {
        let old = std::mem::take(&mut self.amplitudes);
        for (k, v) in old {
            let prev = self.amplitudes.insert(f(k), v);
            debug_assert!(prev.is_none(), "relabel map is not injective");
        }
    }

    pub fn hadamard(&mut self, qubit: u32) {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&k, &v) in &self.amplitudes {
            let v = v * FRAC_1_SQRT_2;
            let low = k & !mask;
            *out.entry(low).or_default() += v;
            *out.entry(low | mask).or_default() += if k & mask == 0 { v } else { -v };
        }
        self.amplitudes = out;
        self.prune();
    }

    /// `diag(1, e^{i angle})` on `qubit`.
    pub fn phase(&mut self, qubit: u32, angle: f64) {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        let w = Complex64::from_polar(1.0, angle);
        for (k, v) in self.amplitudes.iter_mut() {
            if k & mask != 0 {
                *v *= w;
            }
        }
    }

    pub fn s_gate(&mut self, qubit: u32) {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        for (k, v) in self.amplitudes.iter_mut() {
            if k & mask != 0 {
                *v *= Complex64::i();
            }
        }
    }

    pub fn cnot(&mut self, control: u32, target: u32) {
        self.check_qubit(control);
        self.check_qubit(target);
        assert_ne!(control, target);
        let (c, t) = (1u64 << control, 1u64 << target);
        self.relabel(|k| if k & c != 0 { k ^ t } else { k });
    }

    /// Probability that measuring `qubit` yields 0.
    pub fn probability_zero(&self, qubit: u32) -> f64 {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        self.amplitudes
            .iter()
            .filter(|(k, _)| *k & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `qubit` onto `outcome` and renormalises. Returns the
    /// weight of the kept branch before renormalisation.
    pub fn project(&mut self, qubit: u32, outcome: u8) -> f64 {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        let keep = if outcome == 0 { 0 } else { mask };
        self.amplitudes.retain(|k, _| k & mask == keep);
        let weight = self.norm_sqr();
        if weight > 0.0 {
            self.normalize();
        }
        weight
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &SparseState) -> SparseState {
        let shift = self.num_qubits;
        let entries = high
            .iter()
            .flat_map(|(h, hv)| self.iter().map(move |(l, lv)| ((h << shift) | l, hv * lv)));
        SparseState::from_entries(self.num_qubits + high.num_qubits, entries)
    }

    /// Von Neumann entropy (bits) of the reduced state of one qubit.
    pub fn qubit_entropy(&self, qubit: u32) -> f64 {
        self.check_qubit(qubit);
        let mask = 1u64 << qubit;
        let (mut p0, mut p1) = (0.0, 0.0);
        let mut coherence = Complex64::new(0.0, 0.0);
        for (&k, &v) in &self.amplitudes {
            if k & mask == 0 {
                p0 += v.norm_sqr();
                coherence += v * self.amplitude(k | mask).conj();
            } else {
                p1 += v.norm_sqr();
            }
        }
        let total = p0 + p1;
        let (p0, p1, c) = (p0 / total, p1 / total, coherence.norm() / total);
        // eigenvalues of [[p0, c], [c*, p1]]
        let disc = ((p0 - p1).powi(2) + 4.0 * c * c).sqrt();
        let lam = 0.5 * (1.0 + disc);
        binary_entropy(lam)
    }
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 1e-300 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}
