//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 even when a criterion fails so the remaining test targets still
//! run; set `ACCEPTANCE_STRICT=1` to turn any failure into a nonzero exit.

use std::collections::BTreeSet;
use std::time::{Duration, Instant, SystemTime};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shor_magic::experiments::{
    exp_magic_vs_r, exp_magic_vs_tau, exp_plateau, exp_success_rate, pearson, success_slope, write_experiment,
    MagicVsRConfig, MagicVsTauConfig, PlateauConfig, SuccessRateConfig,
};
use shor_magic::magic::{
    d_schedule, lambda_exact, m2_structured, sre_bruteforce, sre_sparse_exact, structured_state_sample, Regime,
    SupportSet,
};
use shor_magic::numtheory::{gcd, mod_pow, order_spectrum, DEFAULT_SPECTRUM_BOUND};
use shor_magic::simulator::{run, ShorInstance, SparseState};

const ORACLE_TOLERANCE: f64 = 1e-9;
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const STABILIZER_TOLERANCE: f64 = 1e-10;
const STRUCTURED_RELATIVE: f64 = 0.03;
const ENTROPY_LIMIT: f64 = 0.05;
const SMALL_R_NATS: f64 = 0.25;
const SATURATION_NATS: f64 = 0.3;
const MIN_PERIODS_EVALUATED: usize = 20;
const SLOPE_TARGET: f64 = 1.0;
const SLOPE_TOLERANCE: f64 = 0.3;
const RATIO_FLOOR: f64 = 0.8;
const PLATEAU_GAP: i64 = 2;
const PLATEAU_SHARE: f64 = 0.8;
const PLATEAU_PEARSON: f64 = 0.9;
const PLATEAU_REPS: u64 = 2000;
const SPECTRUM_BUDGET: Duration = Duration::from_secs(60);

const SEMIPRIMES: [u64; 6] = [143, 323, 667, 1147, 2491, 3127];
const LARGE_MODULUS: u64 = 18923;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle-equivalence", oracle_equivalence),
        ("stabilizer-cases", stabilizer_cases),
        ("structured-state-law", structured_state_law),
        ("schedule-law", schedule_law),
        ("final-magic-vs-r", final_magic_vs_r),
        ("spectrum-check", spectrum_check),
        ("success-rate-shape", success_rate_shape),
        ("plateau-correlation", plateau_correlation),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        failures += usize::from(!result.passed);
        println!("{verdict} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), result.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}

fn random_sparse_state(rng: &mut ChaCha8Rng) -> SparseState {
    let width = rng.gen_range(1..=10u32);
    let size = rng.gen_range(1..=64usize.min(1 << width));
    let entries: Vec<(u64, Complex64)> = (0..size)
        .map(|_| {
            let k = rng.gen_range(0..1u64 << width);
            (k, Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        })
        .collect();
    let mut s = SparseState::from_entries(width, entries);
    s.normalize();
    s
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut probes = 0;
    for (n, a) in [(15, 7), (21, 2), (33, 5), (55, 2), (57, 2)] {
        let inst = ShorInstance::new(n, a).unwrap();
        for seed in 0..20 {
            let (_, traces) = run(&inst, seed, true).unwrap();
            for tr in traces.unwrap() {
                let fast = sre_sparse_exact(&tr.state_at_probe).unwrap();
                let slow = sre_bruteforce(&tr.state_at_probe).unwrap();
                worst = worst.max((fast - slow).abs());
                probes += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..500 {
        let s = random_sparse_state(&mut rng);
        worst = worst.max((sre_sparse_exact(&s).unwrap() - sre_bruteforce(&s).unwrap()).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst < ORACLE_TOLERANCE && elapsed < ORACLE_BUDGET,
        format!("{probes} probes + 500 random states, max |diff| = {worst:.2e}, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn stabilizer_cases() -> Outcome {
    let mut first_worst = 0.0f64;
    let mut instances = 0;
    for n in [15u64, 21, 33, 55, 57] {
        for a in (2..n).filter(|&a| gcd(a, n) == 1) {
            let inst = ShorInstance::new(n, a).unwrap();
            let (_, traces) = run(&inst, a, true).unwrap();
            first_worst = first_worst.max(sre_sparse_exact(&traces.unwrap()[0].state_at_probe).unwrap().abs());
            instances += 1;
        }
    }
    let mut order_two_worst = 0.0f64;
    for n in [15u64, 21, 33, 55, 57, 143] {
        let inst = ShorInstance::new(n, n - 1).unwrap();
        for seed in 0..10 {
            let (_, traces) = run(&inst, seed, true).unwrap();
            for tr in traces.unwrap() {
                order_two_worst = order_two_worst.max(sre_sparse_exact(&tr.state_at_probe).unwrap().abs());
            }
        }
    }
    outcome(
        first_worst < STABILIZER_TOLERANCE && order_two_worst < STABILIZER_TOLERANCE,
        format!("first-step max {first_worst:.1e} over {instances} instances; a=N-1 max {order_two_worst:.1e}"),
    )
}

fn structured_state_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for (i, d) in [8usize, 16, 32, 64].iter().cycle().take(20).enumerate() {
        let mut strings = BTreeSet::new();
        while strings.len() < *d {
            strings.insert(rng.gen_range(0..1u64 << 10));
        }
        let support = SupportSet::new(10, strings).unwrap();
        let predicted = m2_structured(*d as u64, lambda_exact(&support) as f64).unwrap();
        let mean = (0..200u64)
            .map(|s| sre_sparse_exact(&structured_state_sample(&support, 1000 * i as u64 + s).unwrap()).unwrap())
            .sum::<f64>()
            / 200.0;
        let rel = (mean - predicted).abs() / predicted;
        if rel > worst {
            worst = rel;
            worst_case = format!("D={d}: sampled {mean:.4} vs model {predicted:.4}");
        }
    }
    outcome(worst < STRUCTURED_RELATIVE, format!("max relative deviation {:.2}% ({worst_case})", 100.0 * worst))
}

fn schedule_law() -> Outcome {
    let moduli = [21u64, 33, 35, 39, 51, 55, 57, 65, 69, 77, 85, 87, 91, 95, 119, 133, 143];
    let (mut probes, mut support_mismatch, mut entropy_checked, mut entropy_violations) = (0, 0, 0, 0);
    let mut worst_entropy = (0.0f64, String::new());
    for n in moduli {
        for a in (2..n).filter(|&a| gcd(a, n) == 1) {
            let inst = ShorInstance::new(n, a).unwrap();
            let dec = inst.decomposition;
            let top = 1u64 << inst.n;
            let orbit: BTreeSet<u64> = (0..dec.r_odd).map(|j| mod_pow(a, j << dec.k, n)).collect();
            for seed in 0..3 {
                let (_, traces) = run(&inst, seed, true).unwrap();
                for tr in traces.unwrap() {
                    probes += 1;
                    let entry = d_schedule(&dec, inst.t, tr.tau, inst.num_qubits).unwrap();
                    let support: BTreeSet<u64> = tr.state_at_probe.support().collect();
                    let ok = match entry.regime {
                        Regime::Ramp => {
                            let shift = 1u64 << (inst.t - tr.tau);
                            let expected: BTreeSet<u64> = (0..1u64 << tr.tau)
                                .map(|m| ((m & 1) * top) | mod_pow(a, m * shift, n))
                                .collect();
                            support == expected
                        }
                        Regime::Late => support.len() as u64 == entry.d,
                        Regime::Plateau | Regime::PlateauTransient => {
                            support.iter().map(|s| s & (top - 1)).collect::<BTreeSet<u64>>() == orbit
                        }
                    };
                    support_mismatch += usize::from(!ok);
                    let in_plateau = tr.tau > dec.tau_star && tr.tau <= inst.t - dec.k;
                    if in_plateau && tr.tau - dec.tau_star >= 4 {
                        entropy_checked += 1;
                        let s = tr.state_at_probe.qubit_entropy(inst.qft_qubit());
                        if s >= ENTROPY_LIMIT {
                            entropy_violations += 1;
                        }
                        if s > worst_entropy.0 {
                            worst_entropy = (s, format!("N={n} a={a} r={} tau={}", dec.r, tr.tau));
                        }
                    }
                }
            }
        }
    }
    outcome(
        support_mismatch == 0 && entropy_violations == 0,
        format!(
            "{probes} probes, {support_mismatch} support mismatches; QFT-qubit entropy >= {ENTROPY_LIMIT} bits in \
             {entropy_violations}/{entropy_checked} disentangled-window probes (max {:.3} at {})",
            worst_entropy.0, worst_entropy.1
        ),
    )
}

fn final_magic_vs_r() -> Outcome {
    let rows = exp_magic_vs_r(&MagicVsRConfig { modulus: LARGE_MODULUS, samples_per_r: 10, seed: 0 }).unwrap();
    let periods: BTreeSet<u64> = rows.iter().map(|r| r.r).collect();
    let num_qubits = rows[0].num_qubits;
    let large_threshold = 8.0 * 2f64.powf(f64::from(num_qubits) / 2.0);
    let mut small_bad = Vec::new();
    let mut large_bad = Vec::new();
    let (mut small_n, mut large_n) = (0, 0);
    for row in &rows {
        if row.r <= 64 {
            small_n += 1;
            let expected = if row.r <= 2 { 0.0 } else { row.m2_small_r_asymptote };
            if (row.m2_final_exact_lambda - expected).abs() > SMALL_R_NATS {
                small_bad.push(format!("r={} a={} {:.3} vs {:.3}", row.r, row.a, row.m2_final_exact_lambda, expected));
            }
        }
        if row.r as f64 >= large_threshold {
            large_n += 1;
            if (row.m2_final_exact_lambda - row.m2_saturation_asymptote).abs() > SATURATION_NATS {
                large_bad.push(format!("r={} a={}", row.r, row.a));
            }
        }
    }
    small_bad.dedup_by(|x, y| x.split(' ').next() == y.split(' ').next());
    outcome(
        periods.len() >= MIN_PERIODS_EVALUATED && small_bad.is_empty() && large_bad.is_empty() && large_n > 0,
        format!(
            "{} periods evaluated; small r<=64: {} of {small_n} points off ({}); large r>={large_threshold:.0}: {} of {large_n} off",
            periods.len(),
            rows.iter()
                .filter(|r| r.r <= 64)
                .filter(|r| {
                    let e = if r.r <= 2 { 0.0 } else { r.m2_small_r_asymptote };
                    (r.m2_final_exact_lambda - e).abs() > SMALL_R_NATS
                })
                .count(),
            small_bad.join("; "),
            large_bad.len()
        ),
    )
}

fn spectrum_check() -> Outcome {
    let start = Instant::now();
    let s = order_spectrum(LARGE_MODULUS, DEFAULT_SPECTRUM_BOUND).unwrap();
    let total: u64 = s.counts.values().sum();
    let elapsed = start.elapsed();
    outcome(
        s.len() == 35 && total == s.total_coprimes && elapsed < SPECTRUM_BUDGET,
        format!(
            "{} periods, sum of counts {total}/{} units, lambda={}, {:.2}s",
            s.len(),
            s.total_coprimes,
            s.lambda,
            elapsed.as_secs_f64()
        ),
    )
}

fn success_rate_shape() -> Outcome {
    let config = SuccessRateConfig { moduli: SEMIPRIMES.to_vec(), reps_per_a: 100, coprimes_per_r: 100, seed: 0 };
    let rows = exp_success_rate(&config).unwrap();
    let mut slopes = Vec::new();
    let mut slope_ok = true;
    let (mut ratio_rows, mut ratio_low) = (0, 0);
    for n in SEMIPRIMES {
        let of_n: Vec<_> = rows.iter().filter(|r| r.modulus == n).cloned().collect();
        let slope = success_slope(&of_n);
        slope_ok &= slope.is_some_and(|s| (s - SLOPE_TARGET).abs() <= SLOPE_TOLERANCE);
        slopes.push(format!("{n}:{}", slope.map_or("-".into(), |s| format!("{s:.2}"))));
        let half = 2f64.powf(f64::from(of_n[0].num_qubits) / 2.0);
        for row in of_n.iter().filter(|r| r.r as f64 > half) {
            ratio_rows += 1;
            ratio_low += usize::from(row.m2_ratio <= RATIO_FLOOR);
        }
    }
    let best_ratio = rows.iter().map(|r| r.m2_ratio).fold(0.0, f64::max);
    outcome(
        slope_ok && ratio_low == 0,
        format!(
            "top-decade slopes [{}]; r>2^(L/2) rows with M2/(L ln2) <= {RATIO_FLOOR}: {ratio_low}/{ratio_rows} (max ratio {best_ratio:.3})",
            slopes.join(" ")
        ),
    )
}

fn plateau_correlation() -> Outcome {
    let periods = vec![36, 42, 63, 84, 111, 126, 222, 259, 518, 1036, 2331, 4662, 9324];
    let config = PlateauConfig {
        modulus: LARGE_MODULUS,
        periods,
        reps: PLATEAU_REPS,
        seed: 0,
        ..Default::default()
    };
    let pairs = exp_plateau(&config).unwrap();
    let used: Vec<_> = pairs.iter().filter(|p| p.r > 2 && !p.censored()).collect();
    let close = used.iter().filter(|p| (p.delta_tau_m2 - p.delta_tau_psucc).abs() <= PLATEAU_GAP).count();
    let points: Vec<(f64, f64)> = used.iter().map(|p| (p.delta_tau_m2 as f64, p.delta_tau_psucc as f64)).collect();
    let rho = pearson(&points).unwrap_or(f64::NAN);
    let share = close as f64 / used.len() as f64;
    let listing: Vec<String> = used.iter().map(|p| format!("{}:{}/{}", p.r, p.delta_tau_m2, p.delta_tau_psucc)).collect();
    outcome(
        used.len() >= 10 && share >= PLATEAU_SHARE && rho >= PLATEAU_PEARSON,
        format!(
            "{} coprimes, {close} within {PLATEAU_GAP} steps, pearson {rho:.3}; r:dtau_m2/dtau_psucc [{}]",
            used.len(),
            listing.join(" ")
        ),
    )
}

fn determinism() -> Outcome {
    let base = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let run_all = |threads: usize, dir: &std::path::Path| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let now = (SystemTime::now(), Instant::now());
            let tau = MagicVsTauConfig { modulus: 57, reps: 20, seed: 11, ..Default::default() };
            write_experiment(dir, "magic_vs_tau", &exp_magic_vs_tau(&tau).unwrap(), &tau, 11, now, &[]).unwrap();
            let by_r = MagicVsRConfig { modulus: 2491, samples_per_r: 5, seed: 11 };
            write_experiment(dir, "magic_vs_r", &exp_magic_vs_r(&by_r).unwrap(), &by_r, 11, now, &[]).unwrap();
            let sr = SuccessRateConfig { moduli: vec![143, 323], reps_per_a: 50, coprimes_per_r: 10, seed: 11 };
            write_experiment(dir, "success_rate", &exp_success_rate(&sr).unwrap(), &sr, 11, now, &[]).unwrap();
            let pl = PlateauConfig { modulus: 667, periods: vec![22, 154], reps: 300, seed: 11, ..Default::default() };
            write_experiment(dir, "plateau", &exp_plateau(&pl).unwrap(), &pl, 11, now, &[]).unwrap();
        });
    };
    let one = base.join("threads-1");
    let many = base.join("threads-4");
    run_all(1, &one);
    run_all(4, &many);
    let mut differing = Vec::new();
    for name in ["magic_vs_tau", "magic_vs_r", "success_rate", "plateau"] {
        let csv = |d: &std::path::Path| std::fs::read(d.join(format!("{name}.csv"))).unwrap();
        let manifest = |d: &std::path::Path| {
            let mut v: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(d.join(format!("{name}.manifest.json"))).unwrap()).unwrap();
            v.as_object_mut().unwrap().remove("timing");
            v
        };
        if csv(&one) != csv(&many) || manifest(&one) != manifest(&many) {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            "4 experiments byte-identical at 1 and 4 threads".into()
        } else {
            format!("differences in {}", differing.join(", "))
        },
    )
}

