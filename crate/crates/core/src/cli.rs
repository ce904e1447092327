//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when factoring runs out of attempts, 2 for
//! usage and input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{self, SweepSummary, TraceOptions, DEFAULT_SWEEP_N_MAX, LONG_RUN_SWEEP_N_MAX};
use crate::groverian::{maximize, MaximizeConfig};
use crate::rng;
use crate::shor::{self, YStrategy};
use crate::statevector::{PeriodicStateSpec, StateVector, INPUT_NORM_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "shor-entanglement", version, about = "Entanglement in a simulated Shor's algorithm")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor N with the simulated algorithm.
    Factor(FactorArgs),
    /// Trace the Groverian measure through the QFT.
    Trace(TraceArgs),
    /// Groverian measure of a state file, as JSON.
    Groverian(GroverianArgs),
    /// G of the main register for every composite N <= N_max and every base.
    Sweep(SweepArgs),
    /// P_max and QFT drift of periodic states.
    PeriodicStudy(PeriodicStudyArgs),
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(long = "n")]
    pub n: u64,
    /// Fixed base; drawn at random when absent.
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub max_attempts: usize,
    /// Write the attempt log as JSON here.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).multiple(false)))]
pub struct TraceArgs {
    /// Shor main register for N and y.
    #[arg(long, num_args = 2, value_names = ["N", "Y"], group = "source")]
    pub shor: Option<Vec<u64>>,
    /// Random product state from this seed.
    #[arg(long, value_name = "SEED", group = "source")]
    pub product: Option<u64>,
    /// Haar-random state from this seed.
    #[arg(long, value_name = "SEED", group = "source")]
    pub random: Option<u64>,
    /// Periodic state on L qubits with period r and shift l.
    #[arg(long, num_args = 3, value_names = ["L", "R", "SHIFT"], group = "source")]
    pub periodic: Option<Vec<u64>>,
    /// State file.
    #[arg(long, group = "source")]
    pub file: Option<PathBuf>,
    /// All product and random traces of the gate-level comparison plot.
    #[arg(long, group = "source")]
    pub fig2: bool,
    /// The three Shor traces (91, 41), (33, 23), (33, 4).
    #[arg(long, group = "source")]
    pub fig3: bool,
    /// Register size for --product, --random and --fig2.
    #[arg(long, default_value_t = 9)]
    pub qubits: usize,
    /// Auxiliary shift for --shor and --fig3.
    #[arg(long, default_value_t = 0)]
    pub shift: u64,
    /// Traces of each kind for --fig2.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    #[arg(long, default_value_t = MaximizeConfig::SWEEP_RESTARTS)]
    pub restarts: usize,
    #[arg(long)]
    pub every_gate: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV. Defaults to fig2_trace.csv / fig3_trace.csv for the
    /// presets and to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroverianArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = MaximizeConfig::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = DEFAULT_SWEEP_N_MAX)]
    pub n_max: u64,
    /// Allow N_max above 100 (and default to 200).
    #[arg(long)]
    pub long_run: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = MaximizeConfig::SWEEP_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value = "fig4_sweep.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PeriodicStudyArgs {
    #[arg(long, default_value_t = 4)]
    pub l_min: usize,
    #[arg(long, default_value_t = 10)]
    pub l_max: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5, 6, 7, 8])]
    pub periods: Vec<u64>,
    #[arg(long, default_value_t = MaximizeConfig::SWEEP_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "periodic_study.csv")]
    pub out: PathBuf,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Factor(a) => cmd_factor(&a),
        Command::Trace(a) => cmd_trace(&a).map(|_| EXIT_OK),
        Command::Groverian(a) => cmd_groverian(&a).map(|_| EXIT_OK),
        Command::Sweep(a) => cmd_sweep(&a).map(|_| EXIT_OK),
        Command::PeriodicStudy(a) => cmd_periodic_study(&a).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_factor(a: &FactorArgs) -> Result<i32> {
    let strategy = a.y.map_or(YStrategy::Random, YStrategy::Fixed);
    let mut r = rng::from_seed(a.seed);
    let report = shor::factor(a.n, strategy, a.max_attempts, &mut r)?;
    if let Some(path) = &a.log {
        std::fs::write(path, report.attempts_json())?;
    }
    for (i, att) in report.attempts.iter().enumerate() {
        eprintln!(
            "attempt {}: y = {}, l = {}, c = {}, {}",
            i + 1,
            att.y,
            opt(att.l),
            opt(att.c),
            att.status.label()
        );
    }
    match report.factors {
        Some((p, q)) => {
            println!("{} = {p} × {q}", a.n);
            Ok(EXIT_OK)
        }
        None => {
            eprintln!("no factor of {} found in {} attempts", a.n, report.attempts.len());
            Ok(EXIT_FAILURE)
        }
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn cmd_trace(a: &TraceArgs) -> Result<()> {
    let options = TraceOptions { restarts: a.restarts, every_gate: a.every_gate };
    let records = if a.fig2 {
        experiments::run_fig2(a.qubits, a.count, a.count, a.seed, &options)?
    } else if a.fig3 {
        experiments::run_fig3(&experiments::FIG3_CASES, a.shift, a.seed, &options)?
    } else if let Some(v) = &a.shor {
        experiments::run_fig3(&[(v[0], v[1])], a.shift, a.seed, &options)?
    } else {
        let (id, state) = single_trace_source(a)?;
        let mut r = rng::derive(a.seed, &[1]);
        experiments::trace_qft(&id, &state, &options, &mut r)?
    };
    let out = a.out.clone().or_else(|| {
        if a.fig2 {
            Some(PathBuf::from("fig2_trace.csv"))
        } else if a.fig3 {
            Some(PathBuf::from("fig3_trace.csv"))
        } else {
            None
        }
    });
    with_output(out.as_deref(), |w| experiments::write_trace_csv(w, &records, a.seed))
}

fn single_trace_source(a: &TraceArgs) -> Result<(String, StateVector)> {
    if let Some(seed) = a.product {
        let mut r = rng::from_seed(seed);
        Ok((format!("product-{seed}"), StateVector::random_product(a.qubits, &mut r)?.0))
    } else if let Some(seed) = a.random {
        let mut r = rng::from_seed(seed);
        Ok((format!("random-{seed}"), StateVector::random_isotropic(a.qubits, &mut r)?))
    } else if let Some(v) = &a.periodic {
        let spec = PeriodicStateSpec::new(v[0] as usize, v[1], v[2])?;
        Ok((format!("periodic-L{}-r{}-l{}", v[0], v[1], v[2]), StateVector::periodic(&spec)))
    } else if let Some(path) = &a.file {
        let id = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
        Ok((id, StateVector::load(path)?))
    } else {
        Err(Error::InvalidInstance("no trace source given".into()))
    }
}

fn with_output<F>(path: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_groverian(a: &GroverianArgs) -> Result<()> {
    let state = StateVector::load(&a.file)?;
    debug_assert!(state.norm_error() <= INPUT_NORM_TOLERANCE);
    let mut r = rng::from_seed(a.seed);
    let res = maximize(&state, &MaximizeConfig::with_restarts(a.restarts), &mut r);
    println!("{}", res.to_json());
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    // --long-run without an explicit --n-max means the extended range
    let n_max = if a.long_run && a.n_max == DEFAULT_SWEEP_N_MAX { LONG_RUN_SWEEP_N_MAX } else { a.n_max };
    if n_max > DEFAULT_SWEEP_N_MAX && !a.long_run {
        return Err(Error::InvalidInstance(format!(
            "--n-max {n_max} exceeds {DEFAULT_SWEEP_N_MAX}; pass --long-run"
        )));
    }
    let records = experiments::run_fig4(n_max, a.seed, a.restarts)?;
    with_output(Some(&a.out), |w| experiments::write_sweep_csv(w, &records, a.seed))?;
    let s = SweepSummary::from_records(&records);
    println!("cells: {}", s.total);
    println!("gcd_shortcut: {}", s.gcd_shortcut);
    println!("power_of_two_order: {}", s.power_of_two_order);
    println!("entangled: {}", s.entangled);
    println!("max G: {}", s.max_g);
    println!("bound violations: {}", s.bound_violations);
    println!("classification mismatches: {}", s.classification_mismatches);
    Ok(())
}

fn cmd_periodic_study(a: &PeriodicStudyArgs) -> Result<()> {
    if a.l_min < 1 || a.l_min > a.l_max {
        return Err(Error::InvalidInstance(format!("bad qubit range {}..={}", a.l_min, a.l_max)));
    }
    let options = TraceOptions { restarts: a.restarts, every_gate: false };
    let max_l = a.l_max;
    // Periods that do not fit the smallest register are skipped there.
    let mut records = Vec::new();
    for l in a.l_min..=max_l {
        let periods: Vec<u64> = a.periods.iter().copied().filter(|&r| r >= 1 && r < 1 << l).collect();
        records.extend(experiments::run_periodic_study(l..=l, &periods, a.seed, &options)?);
    }
    with_output(Some(&a.out), |w| experiments::write_periodic_csv(w, &records, a.seed))?;
    println!("rows: {}", records.len());
    Ok(())
}
