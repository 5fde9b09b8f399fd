//! Quick cross-checks of every fast engine against its slow reference.

use rand::Rng;
use serde::Serialize;

use crate::experiments::rng;
use crate::magic::{lambda_exact, sre_bruteforce, sre_sparse_exact, SupportSet};
use crate::numtheory::{continued_fraction_expand, gcd, order_spectrum, DEFAULT_SPECTRUM_BOUND};
use crate::simulator::{dense_reference, run, OrbitSampler, ShorInstance, SparseState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const MODULI: [(u64, u64); 4] = [(15, 7), (21, 2), (33, 5), (55, 4)];
const SEEDS: u64 = 5;
const TOLERANCE: f64 = 1e-9;

fn check(module: &'static str, name: &'static str, outcome: Result<String, String>) -> CheckResult {
    let passed = outcome.is_ok();
    let detail = outcome.unwrap_or_else(|e| e);
    CheckResult { module, name, passed, detail }
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let checks = vec![
        check("numtheory", "order-spectrum", spectrum_check()),
        check("numtheory", "continued-fraction", fraction_check()),
        check("simulator", "sparse-vs-dense", dense_check()),
        check("simulator", "orbit-vs-sparse", orbit_check()),
        check("magic", "sre-vs-bruteforce", sre_check(seed)),
        check("magic", "order-two-stabilizer", stabilizer_check()),
        check("magic", "lambda-vs-enumeration", lambda_check(seed)),
    ];
    SelftestReport { checks }
}

fn spectrum_check() -> Result<String, String> {
    for n in 3..=200u64 {
        let s = order_spectrum(n, DEFAULT_SPECTRUM_BOUND).map_err(|e| e.to_string())?;
        for a in (2..n).filter(|&a| gcd(a, n) == 1) {
            let mut r = 1;
            let mut x = a;
            while x != 1 {
                x = x * a % n;
                r += 1;
            }
            if !s.counts.contains_key(&r) {
                return Err(format!("order {r} of {a} mod {n} missing"));
            }
        }
        let total: u64 = s.counts.values().sum();
        if total != s.total_coprimes {
            return Err(format!("counts for {n} do not add up"));
        }
    }
    Ok("moduli 3..=200".into())
}

fn fraction_check() -> Result<String, String> {
    let cf = continued_fraction_expand(3, 3);
    let dens: Vec<u64> = cf.denominators().collect();
    if cf.coefficients == [2, 1, 2] && dens == [2, 3, 8] {
        Ok("3/8".into())
    } else {
        Err(format!("3/8 expanded to {:?}", cf.coefficients))
    }
}

fn instances() -> impl Iterator<Item = ShorInstance> {
    MODULI.iter().map(|&(n, a)| ShorInstance::new(n, a).expect("valid instance"))
}

fn dense_check() -> Result<String, String> {
    let mut worst = 0.0f64;
    for inst in instances() {
        for seed in 0..SEEDS {
            let dense = dense_reference(&inst, seed).map_err(|e| e.to_string())?;
            let (sparse, traces) = run(&inst, seed, true).map_err(|e| e.to_string())?;
            if dense.record != sparse {
                return Err(format!("N={} a={} seed={seed}: records differ", inst.modulus, inst.a));
            }
            for (probe, trace) in dense.probes.iter().zip(traces.expect("traces")) {
                for (i, amp) in probe.iter().enumerate() {
                    worst = worst.max((amp - trace.state_at_probe.amplitude(i as u64)).norm());
                }
            }
        }
    }
    if worst < TOLERANCE {
        Ok(format!("max amplitude deviation {worst:.1e}"))
    } else {
        Err(format!("amplitude deviation {worst:.1e}"))
    }
}

fn orbit_check() -> Result<String, String> {
    for inst in instances() {
        let mut orbit = OrbitSampler::new(inst);
        for seed in 0..4 * SEEDS {
            let a = orbit.run(seed).map_err(|e| e.to_string())?;
            let (b, _) = run(&inst, seed, false).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("N={} a={} seed={seed}: records differ", inst.modulus, inst.a));
            }
        }
    }
    Ok("records identical".into())
}

fn sre_check(seed: u64) -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut compare = |state: &SparseState| -> Result<(), String> {
        let fast = sre_sparse_exact(state).map_err(|e| e.to_string())?;
        let slow = sre_bruteforce(state).map_err(|e| e.to_string())?;
        worst = worst.max((fast - slow).abs());
        Ok(())
    };
    for inst in instances() {
        for s in 0..SEEDS {
            let (_, traces) = run(&inst, s, true).map_err(|e| e.to_string())?;
            for trace in traces.expect("traces") {
                compare(&trace.state_at_probe)?;
            }
        }
    }
    let mut stream = rng::stream(seed, "selftest-states", &[]);
    for _ in 0..50 {
        let width = stream.gen_range(1..=7u32);
        let size = stream.gen_range(1..=(1usize << width));
        let entries = (0..size).map(|_| {
            let k = stream.gen_range(0..1u64 << width);
            let amp = num_complex::Complex64::new(stream.gen_range(-1.0..1.0), stream.gen_range(-1.0..1.0));
            (k, amp)
        });
        let mut state = SparseState::from_entries(width, entries.collect::<Vec<_>>());
        if state.norm_sqr() == 0.0 {
            continue;
        }
        state.normalize();
        compare(&state)?;
    }
    if worst < TOLERANCE {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("deviation {worst:.1e}"))
    }
}

fn stabilizer_check() -> Result<String, String> {
    let inst = ShorInstance::new(33, 32).map_err(|e| e.to_string())?;
    for s in 0..SEEDS {
        let (_, traces) = run(&inst, s, true).map_err(|e| e.to_string())?;
        for trace in traces.expect("traces") {
            let m2 = sre_sparse_exact(&trace.state_at_probe).map_err(|e| e.to_string())?;
            if m2.abs() > 1e-10 {
                return Err(format!("tau={} has M2={m2:.3e}", trace.tau));
            }
        }
    }
    Ok("N=33 a=32".into())
}

fn lambda_check(seed: u64) -> Result<String, String> {
    let mut stream = rng::stream(seed, "selftest-supports", &[]);
    for _ in 0..20 {
        let width = stream.gen_range(3..=8u32);
        let d = stream.gen_range(1..=(1usize << width).min(24));
        let strings: Vec<u64> = (0..d).map(|_| stream.gen_range(0..1u64 << width)).collect();
        let support = SupportSet::new(width, strings).map_err(|e| e.to_string())?;
        let s = support.strings();
        let mut brute = 0u128;
        for &a in s {
            for &b in s {
                for &c in s {
                    for &e in s {
                        let distinct = a != b && a != c && a != e && b != c && b != e && c != e;
                        if distinct && a ^ b ^ c ^ e == 0 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        let fast = lambda_exact(&support);
        if fast != brute {
            return Err(format!("lambda {fast} vs enumeration {brute}"));
        }
    }
    Ok("20 random supports".into())
}
