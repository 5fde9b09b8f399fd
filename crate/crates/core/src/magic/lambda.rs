//! The quadruplet count `Lambda`: ordered quadruplets of distinct support
//! strings whose XOR vanishes.

use rustc_hash::FxHashMap;

use super::SupportSet;

/// Widths up to this use a flat counter array instead of a hash map.
const MAX_DENSE_COUNTER_WIDTH: u32 = 22;

/// Groups the `D(D-1)/2` unordered pairs by XOR value `x` and returns
/// `4 * sum_x A(x) (A(x) - 1)`. Every quadruplet `{m,n,p,q}` with
/// `m^n = p^q` is seen once per pairing, which the factor 4 and the
/// ordering of both pairs account for.
pub fn lambda_exact(support: &SupportSet) -> u128 {
    let s = support.strings();
    if s.len() < 4 {
        return 0;
    }
    let width = support.width();
    let sum: u128 = if width <= MAX_DENSE_COUNTER_WIDTH {
        let mut counts = vec![0u32; 1usize << width];
        for (i, &m) in s.iter().enumerate() {
            for &n in &s[i + 1..] {
                counts[(m ^ n) as usize] += 1;
            }
        }
        counts.iter().map(|&a| u128::from(a) * u128::from(a.saturating_sub(1))).sum()
    } else {
        let mut counts: FxHashMap<u64, u64> = FxHashMap::default();
        for (i, &m) in s.iter().enumerate() {
            for &n in &s[i + 1..] {
                *counts.entry(m ^ n).or_insert(0) += 1;
            }
        }
        counts.values().map(|&a| u128::from(a) * u128::from(a - 1)).sum()
    };
    4 * sum
}

/// Random-support estimate `D(D-1)(D-2)(D-3) / 2^width`.
pub fn lambda_closed(d: u64, width: u32) -> f64 {
    if d < 4 {
        return 0.0;
    }
    let d = d as f64;
    d * (d - 1.0) * (d - 2.0) * (d - 3.0) / 2f64.powi(width as i32)
}
