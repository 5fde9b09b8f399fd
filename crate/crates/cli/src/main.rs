mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shor_magic::experiments::{
    self, exp_magic_vs_r, exp_magic_vs_tau, exp_plateau, exp_success_rate, rng, success_slope, write_experiment,
    ExperimentError, MagicVsRConfig, MagicVsTauConfig, PlateauConfig, SuccessRateConfig,
};
use shor_magic::numtheory::{order_spectrum, DEFAULT_SPECTRUM_BOUND};
use shor_magic::selftest::run_selftest;
use shor_magic::simulator::{run, write_trace_jsonl, ShorInstance};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "shor-magic", version, about = "Sparse semiclassical order finding and its magic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// top-level seed for every random choice
    #[arg(long)]
    seed: Option<u64>,
    /// output directory [default: results]
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with default values; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Default)]
struct Selectors {
    /// modulus
    #[arg(long = "N", value_name = "N")]
    modulus: Option<u64>,
    /// explicit base (repeatable)
    #[arg(long = "a", value_delimiter = ',')]
    a: Vec<u64>,
    /// pick a random base of this order (repeatable)
    #[arg(long = "r", value_delimiter = ',')]
    r: Vec<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One circuit execution
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Selectors,
        /// number of steps
        #[arg(long)]
        t: Option<u32>,
        /// write the per-step trace as JSON lines
        #[arg(long)]
        trace: bool,
    },
    /// Magic along the circuit for selected bases
    MagicCurve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Selectors,
        #[arg(long)]
        t: Option<u32>,
        /// simulated runs averaged per curve [default: 150]
        #[arg(long)]
        reps: Option<u64>,
        /// skip the simulated SRE column
        #[arg(long)]
        no_exact_sre: bool,
    },
    /// Final-step magic for every order
    MagicVsR {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N", value_name = "N")]
        modulus: Option<u64>,
        /// bases sampled per order [default: 10]
        #[arg(long)]
        samples_per_r: Option<usize>,
    },
    /// Conditional success rate per order for several moduli
    SuccessRate {
        #[command(flatten)]
        common: Common,
        /// moduli, comma separated or repeated
        #[arg(long = "N", value_name = "N", value_delimiter = ',')]
        moduli: Vec<u64>,
        /// runs per base [default: 100]
        #[arg(long)]
        reps: Option<u64>,
        /// bases per order [default: 100]
        #[arg(long)]
        coprimes_per_r: Option<usize>,
    },
    /// Plateau length against success decay
    Plateau {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Selectors,
        /// largest step count [default: 2n+1]
        #[arg(long)]
        t: Option<u32>,
        /// smallest step count [default: 2]
        #[arg(long)]
        t_min: Option<u32>,
        /// runs per step count [default: 2000]
        #[arg(long)]
        reps: Option<u64>,
    },
    /// Order distribution of the units modulo N
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N", value_name = "N")]
        modulus: Option<u64>,
    },
    /// Cross-check fast engines against references
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    module: &'static str,
    message: String,
    usage: bool,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { module: "cli", message: message.into(), usage: true }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let usage = matches!(e, ExperimentError::InvalidConfig(_));
        Self { module: e.module(), message: e.to_string(), usage }
    }
}

impl From<shor_magic::simulator::SimError> for Failure {
    fn from(e: shor_magic::simulator::SimError) -> Self {
        ExperimentError::from(e).into()
    }
}

impl From<shor_magic::numtheory::NumTheoryError> for Failure {
    fn from(e: shor_magic::numtheory::NumTheoryError) -> Self {
        ExperimentError::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        ExperimentError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = experiments::configure_threads() {
        eprintln!("error [experiments]: {e}");
        return ExitCode::from(2);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error [{}]: {}", f.module, f.message);
            if f.usage {
                eprintln!("run with --help for usage");
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn resolve(name: &str, common: Common, flags: RunConfig) -> Result<RunConfig, Failure> {
    let file = match &common.config {
        Some(path) => RunConfig::load(path).map_err(Failure::usage)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        command: Some(name.to_string()),
        seed: common.seed,
        out: common.out,
        ..flags
    };
    Ok(file.overridden_by(flags))
}

fn selected(select: Selectors) -> RunConfig {
    RunConfig {
        moduli: select.modulus.into_iter().collect(),
        a: select.a,
        r: select.r,
        ..Default::default()
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    let started = (SystemTime::now(), Instant::now());
    match command {
        Command::Run { common, select, t, trace } => {
            let flags = RunConfig { t, trace: trace.then_some(true), ..selected(select) };
            cmd_run(&resolve("run", common, flags)?, started)
        }
        Command::MagicCurve { common, select, t, reps, no_exact_sre } => {
            let flags = RunConfig { t, reps, exact_sre: no_exact_sre.then_some(false), ..selected(select) };
            cmd_magic_curve(&resolve("magic-curve", common, flags)?, started)
        }
        Command::MagicVsR { common, modulus, samples_per_r } => {
            let flags = RunConfig { moduli: modulus.into_iter().collect(), samples_per_r, ..Default::default() };
            cmd_magic_vs_r(&resolve("magic-vs-r", common, flags)?, started)
        }
        Command::SuccessRate { common, moduli, reps, coprimes_per_r } => {
            let flags = RunConfig { moduli, reps, coprimes_per_r, ..Default::default() };
            cmd_success_rate(&resolve("success-rate", common, flags)?, started)
        }
        Command::Plateau { common, select, t, t_min, reps } => {
            let flags = RunConfig { t, t_min, reps, ..selected(select) };
            cmd_plateau(&resolve("plateau", common, flags)?, started)
        }
        Command::Spectrum { common, modulus } => {
            let flags = RunConfig { moduli: modulus.into_iter().collect(), ..Default::default() };
            cmd_spectrum(&resolve("spectrum", common, flags)?, started)
        }
        Command::Selftest { common } => cmd_selftest(&resolve("selftest", common, RunConfig::default())?),
    }
}

fn finish<T: Serialize>(
    cfg: &RunConfig,
    name: &str,
    rows: &[T],
    started: (SystemTime, Instant),
    extras: &[&str],
) -> Result<PathBuf, Failure> {
    Ok(write_experiment(&cfg.out_dir(), name, rows, cfg, cfg.seed(), started, extras)?)
}

#[derive(Serialize)]
struct RunRow {
    #[serde(rename = "N")]
    modulus: u64,
    a: u64,
    r: u64,
    t: u32,
    seed: u64,
    outcomes: String,
    x_num: u64,
    x: f64,
    success: bool,
    found_period: Option<u64>,
}

fn cmd_run(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    let modulus = cfg.single_modulus().map_err(Failure::usage)?;
    let a = match (cfg.a.as_slice(), cfg.r.as_slice()) {
        ([a], []) => *a,
        ([], [r]) => {
            let spectrum = order_spectrum(modulus, DEFAULT_SPECTRUM_BOUND)?;
            let units = spectrum.units_with_order(*r);
            if units.is_empty() {
                return Err(ExperimentError::NoCoprimeWithPeriod { modulus, period: *r }.into());
            }
            let mut stream = rng::stream(cfg.seed(), "run-coprime", &[*r]);
            rng::sample_without_replacement(&units, 1, &mut stream)[0]
        }
        _ => return Err(Failure::usage("run needs exactly one of --a or --r")),
    };
    let mut instance = ShorInstance::new(modulus, a)?;
    if let Some(t) = cfg.t {
        instance = instance.with_steps(t)?;
    }
    let want_trace = cfg.trace.unwrap_or(false);
    let (record, traces) = run(&instance, cfg.seed(), want_trace)?;
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir)?;
    let mut extras = Vec::new();
    if let Some(traces) = traces {
        let mut out = BufWriter::new(File::create(dir.join("trace.jsonl"))?);
        write_trace_jsonl(&mut out, &traces)?;
        out.flush()?;
        extras.push("trace.jsonl");
    }
    let row = RunRow {
        modulus,
        a,
        r: instance.period(),
        t: instance.t,
        seed: cfg.seed(),
        outcomes: record.outcomes.iter().map(|m| char::from(b'0' + m)).collect(),
        x_num: record.x_num,
        x: record.x(),
        success: record.success,
        found_period: record.found_period,
    };
    println!(
        "N={modulus} a={a} r={} t={} x={}/2^{} success={} found={}",
        row.r,
        row.t,
        row.x_num,
        row.t,
        row.success,
        row.found_period.map_or("-".to_string(), |r| r.to_string())
    );
    finish(cfg, "run", &[row], started, &extras)?;
    Ok(())
}

fn cmd_magic_curve(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    let config = MagicVsTauConfig {
        modulus: cfg.single_modulus().map_err(Failure::usage)?,
        coprimes: cfg.a.clone(),
        periods: cfg.r.clone(),
        reps: cfg.reps.unwrap_or(150),
        steps: cfg.t,
        exact_sre: cfg.exact_sre.unwrap_or(true),
        seed: cfg.seed(),
    };
    let rows = exp_magic_vs_tau(&config)?;
    let path = finish(cfg, "magic_vs_tau", &rows, started, &[])?;
    println!("{} rows, manifest {}", rows.len(), path.display());
    Ok(())
}

fn cmd_magic_vs_r(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    let config = MagicVsRConfig {
        modulus: cfg.single_modulus().map_err(Failure::usage)?,
        samples_per_r: cfg.samples_per_r.unwrap_or(10),
        seed: cfg.seed(),
    };
    let rows = exp_magic_vs_r(&config)?;
    let path = finish(cfg, "magic_vs_r", &rows, started, &[])?;
    println!("{} rows, manifest {}", rows.len(), path.display());
    Ok(())
}

fn cmd_success_rate(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    if cfg.moduli.is_empty() {
        return Err(Failure::usage("N is required"));
    }
    let config = SuccessRateConfig {
        moduli: cfg.moduli.clone(),
        reps_per_a: cfg.reps.unwrap_or(100),
        coprimes_per_r: cfg.coprimes_per_r.unwrap_or(100),
        seed: cfg.seed(),
    };
    let rows = exp_success_rate(&config)?;
    let path = finish(cfg, "success_rate", &rows, started, &[])?;
    let mut moduli = config.moduli.clone();
    moduli.sort_unstable();
    moduli.dedup();
    for n in moduli {
        let of_n: Vec<_> = rows.iter().filter(|r| r.modulus == n).cloned().collect();
        let slope = success_slope(&of_n).map_or("-".to_string(), |s| format!("{s:.3}"));
        println!("N={n} periods={} top-decade slope={slope}", of_n.len());
    }
    println!("manifest {}", path.display());
    Ok(())
}

fn cmd_plateau(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    let defaults = PlateauConfig::default();
    let config = PlateauConfig {
        modulus: cfg.single_modulus().map_err(Failure::usage)?,
        coprimes: cfg.a.clone(),
        periods: cfg.r.clone(),
        t_min: cfg.t_min.unwrap_or(defaults.t_min),
        t_max: cfg.t,
        reps: cfg.reps.unwrap_or(defaults.reps),
        seed: cfg.seed(),
    };
    if config.coprimes.is_empty() && config.periods.is_empty() {
        return Err(Failure::usage("plateau needs --a or --r"));
    }
    let pairs = exp_plateau(&config)?;
    for p in &pairs {
        println!(
            "a={} r={} dtau_m2={} dtau_psucc={}{}",
            p.a,
            p.r,
            p.delta_tau_m2,
            p.delta_tau_psucc,
            if p.censored() { " (no zero reached)" } else { "" }
        );
    }
    finish(cfg, "plateau", &pairs, started, &[])?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumRow {
    r: u64,
    count: u64,
    g: f64,
}

fn cmd_spectrum(cfg: &RunConfig, started: (SystemTime, Instant)) -> Result<(), Failure> {
    let modulus = cfg.single_modulus().map_err(Failure::usage)?;
    let spectrum = order_spectrum(modulus, DEFAULT_SPECTRUM_BOUND)?;
    let rows: Vec<SpectrumRow> = spectrum
        .counts
        .iter()
        .map(|(&r, &count)| SpectrumRow { r, count, g: spectrum.frequency(r) })
        .collect();
    println!("{:>10} {:>10} {:>12}", "r", "count", "g");
    for row in &rows {
        println!("{:>10} {:>10} {:>12.6}", row.r, row.count, row.g);
    }
    let total: u64 = rows.iter().map(|r| r.count).sum();
    println!(
        "N={modulus} lambda={} periods={} units={} sum g={}/{}",
        spectrum.lambda,
        rows.len(),
        spectrum.total_coprimes,
        total,
        spectrum.total_coprimes
    );
    finish(cfg, "spectrum", &rows, started, &[])?;
    Ok(())
}

fn cmd_selftest(cfg: &RunConfig) -> Result<(), Failure> {
    let report = run_selftest(cfg.seed());
    for c in &report.checks {
        println!("{} {}/{}: {}", if c.passed { "PASS" } else { "FAIL" }, c.module, c.name, c.detail);
    }
    if let Some(dir) = &cfg.out {
        write_report(dir, &report)?;
    }
    let failure = report.failures().next().map(|first| Failure {
        module: first.module,
        message: format!("selftest check {} failed: {}", first.name, first.detail),
        usage: false,
    });
    failure.map_or(Ok(()), Err)
}

fn write_report(dir: &Path, report: &impl Serialize) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(report).map_err(ExperimentError::from)?;
    fs::write(dir.join("selftest.json"), text + "\n")?;
    Ok(())
}
