//! Drivers that trace the Groverian measure through the QFT and sweep it
//! over `(N, y)` pairs, with CSV output.
//!
//! Every driver derives one RNG stream per input (trace state, sweep cell)
//! from the master seed and the input's labels, so results do not depend on
//! how rayon schedules the work.

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groverian::{maximize, maximize_from, MaximizeConfig, OptimizerState, ProductAnsatz};
use crate::rng::{self, SimRng};
use crate::shor::{self, build_qft_schedule, gcd, run_qft, Preprocessed, ShiftMode, ShorInstance};
use crate::statevector::{GateOp, PeriodicStateSpec, StateVector};

/// `G` at or below this counts as no entanglement.
pub const ZERO_G_THRESHOLD: f64 = 1e-4;

/// Slack on the `sqrt(1 - 1/(2N))` bound in the sweep.
pub const BOUND_SLACK: f64 = 1e-6;

pub const DEFAULT_SWEEP_N_MAX: u64 = 100;
pub const LONG_RUN_SWEEP_N_MAX: u64 = 200;

/// The three Shor cases whose traces are plotted together.
pub const FIG3_CASES: [(u64, u64); 3] = [(91, 41), (33, 23), (33, 4)];

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct TraceRecord {
    pub experiment: String,
    /// 0 for the input state, otherwise the 1-based gate position.
    pub ordinal: usize,
    pub gate: Option<GateOp>,
    pub g: f64,
    pub norm_error: f64,
    /// Wall time of the `G` evaluation. Not written to CSV.
    pub eval_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    pub restarts: usize,
    /// Evaluate `G` after Hadamards too (they cannot change it).
    pub every_gate: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { restarts: MaximizeConfig::SWEEP_RESTARTS, every_gate: false }
    }
}

/// Carry a product state along the circuit from record `from` to record
/// `to` (either direction). Hadamards map product states to product states
/// exactly; phase gates are ignored.
fn carry(ansatz: &mut ProductAnsatz, gates: &[GateOp], from: usize, to: usize) {
    let hadamards = |range: &[GateOp]| -> Vec<usize> {
        range.iter().filter_map(|g| if let GateOp::Hadamard { k } = g { Some(*k) } else { None }).collect()
    };
    if from < to {
        // run_qft reverses the qubit order before the first gate
        if from == 0 {
            ansatz.reverse_qubits();
        }
        hadamards(&gates[from..to]).into_iter().for_each(|k| ansatz.apply_hadamard(k));
    } else if to < from {
        hadamards(&gates[to..from]).into_iter().rev().for_each(|k| ansatz.apply_hadamard(k));
        if to == 0 {
            ansatz.reverse_qubits();
        }
    }
}

/// `G` of the input and after each controlled-phase gate and the final gate
/// of the QFT (after every gate with `every_gate`).
///
/// Neighbouring states along the circuit are close, so besides the random
/// restarts each evaluation also starts from the previous optimum carried
/// through the gates in between. A backward pass then re-optimizes every
/// point from its successor's optimum and keeps the better value. This keeps
/// isolated points from settling in a local optimum that the random restarts
/// all happened to find.
pub fn trace_qft<R: Rng + ?Sized>(
    experiment: &str,
    state: &StateVector,
    options: &TraceOptions,
    rng: &mut R,
) -> Result<Vec<TraceRecord>> {
    let schedule = build_qft_schedule(state.num_qubits())?;
    let gates = schedule.gates();
    let last = schedule.len();
    let mut points: Vec<(usize, Option<GateOp>, StateVector)> = vec![(0, None, state.clone())];
    run_qft(state, &schedule, |ordinal, gate, current| {
        if options.every_gate || !gate.is_hadamard() || ordinal == last {
            points.push((ordinal, Some(*gate), current.clone()));
        }
    })?;

    let config = MaximizeConfig::with_restarts(options.restarts);
    let mut fits: Vec<(f64, ProductAnsatz, f64)> = Vec::with_capacity(points.len());
    for (i, (ordinal, _, current)) in points.iter().enumerate() {
        let start = Instant::now();
        let warm: Vec<ProductAnsatz> = fits
            .last()
            .map(|(_, best, _)| {
                let mut a = best.clone();
                carry(&mut a, gates, points[i - 1].0, *ordinal);
                a
            })
            .into_iter()
            .collect();
        let res = maximize_from(current, &config, &warm, rng);
        fits.push((res.p_max, res.best, start.elapsed().as_secs_f64()));
    }
    for i in (0..points.len().saturating_sub(1)).rev() {
        let start = Instant::now();
        let mut a = fits[i + 1].1.clone();
        carry(&mut a, gates, points[i + 1].0, points[i].0);
        let mut opt = OptimizerState::new(&points[i].2, a)?;
        let report = opt.run(&config);
        if report.fidelity > fits[i].0 {
            fits[i].0 = report.fidelity.min(1.0);
            fits[i].1 = opt.into_ansatz();
        }
        fits[i].2 += start.elapsed().as_secs_f64();
    }

    Ok(points
        .into_iter()
        .zip(fits)
        .map(|((ordinal, gate, current), (p, _, secs))| TraceRecord {
            experiment: experiment.to_string(),
            ordinal,
            gate,
            g: (1.0 - p).max(0.0).sqrt(),
            norm_error: current.norm_error(),
            eval_seconds: secs,
        })
        .collect())
}

/// Largest `|G_t - G_0|` along a trace.
pub fn max_drift(records: &[TraceRecord]) -> f64 {
    let Some(first) = records.first() else {
        return 0.0;
    };
    records.iter().map(|r| (r.g - first.g).abs()).fold(0.0, f64::max)
}

/// Largest `|G_t - G_{t-1}|` between consecutive records.
pub fn max_step(records: &[TraceRecord]) -> f64 {
    records.windows(2).map(|w| (w[1].g - w[0].g).abs()).fold(0.0, f64::max)
}

/// QFT traces on random product states followed by isotropic random states.
/// Experiment ids are `product-<i>` and `random-<i>`, 1-based.
pub fn run_fig2(
    num_qubits: usize,
    num_product: usize,
    num_random: usize,
    seed: u64,
    options: &TraceOptions,
) -> Result<Vec<TraceRecord>> {
    if num_qubits < 2 {
        return Err(Error::InvalidInstance("traces need at least 2 qubits".into()));
    }
    let inputs: Vec<(String, u64, u64)> = (1..=num_product)
        .map(|i| (format!("product-{i}"), 0, i as u64))
        .chain((1..=num_random).map(|i| (format!("random-{i}"), 1, i as u64)))
        .collect();
    let traces: Result<Vec<Vec<TraceRecord>>> = inputs
        .par_iter()
        .map(|(id, kind, i)| {
            let mut prep = rng::derive(seed, &[2, *kind, *i, 0]);
            let state = if *kind == 0 {
                StateVector::random_product(num_qubits, &mut prep)?.0
            } else {
                StateVector::random_isotropic(num_qubits, &mut prep)?
            };
            let mut eval = rng::derive(seed, &[2, *kind, *i, 1]);
            trace_qft(id, &state, options, &mut eval)
        })
        .collect();
    Ok(traces?.into_iter().flatten().collect())
}

pub fn shor_experiment_id(n: u64, y: u64) -> String {
    format!("N{n}-y{y}")
}

/// Pre-process each `(N, y)` with the auxiliary outcome fixed to shift `l`,
/// then trace `G` through the QFT.
pub fn run_fig3(
    cases: &[(u64, u64)],
    shift: u64,
    seed: u64,
    options: &TraceOptions,
) -> Result<Vec<TraceRecord>> {
    let traces: Result<Vec<Vec<TraceRecord>>> = cases
        .par_iter()
        .map(|&(n, y)| {
            let instance = ShorInstance::new(n, y)?;
            let mut r = rng::derive(seed, &[3, n, y]);
            match shor::preprocess(&instance, ShiftMode::Fixed(shift), &mut r)? {
                Preprocessed::Periodic(pre) => {
                    trace_qft(&shor_experiment_id(n, y), &pre.state, options, &mut r)
                }
                Preprocessed::NonCoprime { factor } => Err(Error::InvalidInstance(format!(
                    "gcd({y}, {n}) = {factor}: no quantum stage to trace"
                ))),
            }
        })
        .collect();
    Ok(traces?.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    /// `gcd(N, y) > 1`.
    GcdShortcut,
    /// The order of `y` is a power of two.
    PowerOfTwoOrder,
    Entangled,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::GcdShortcut => "gcd_shortcut",
            Classification::PowerOfTwoOrder => "power_of_two_order",
            Classification::Entangled => "entangled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub n: u64,
    pub y: u64,
    pub order: Option<u64>,
    pub odd_part: Option<u64>,
    pub g: f64,
    pub classification: Classification,
    /// `sqrt(1 - 1/(2N))`.
    pub bound: f64,
}

impl SweepRecord {
    pub fn violates_bound(&self) -> bool {
        self.g > self.bound + BOUND_SLACK
    }
}

/// One sweep cell: pre-process with shift 0 and evaluate `G` of the main
/// register. For `gcd(N, y) > 1` the auxiliary register is collapsed onto
/// `y^0 = 1`, which leaves `|0>`.
pub fn sweep_cell(n: u64, y: u64, seed: u64, restarts: usize) -> Result<SweepRecord> {
    let instance = ShorInstance::new(n, y)?;
    let mut r = rng::derive(seed, &[4, n, y]);
    let (state, order) = if gcd(n, y) != 1 {
        (shor::collapse_auxiliary(&instance, 1)?.state, None)
    } else {
        match shor::preprocess(&instance, ShiftMode::Fixed(0), &mut r)? {
            Preprocessed::Periodic(pre) => (pre.state, Some(pre.order)),
            Preprocessed::NonCoprime { .. } => unreachable!("coprime checked above"),
        }
    };
    let mut result = maximize(&state, &MaximizeConfig::with_restarts(restarts), &mut r);
    if !result.converged && restarts < MaximizeConfig::DEFAULT_RESTARTS {
        let retry = maximize(&state, &MaximizeConfig::default(), &mut r);
        if retry.p_max > result.p_max {
            result = retry;
        }
    }
    let odd_part = order.map(|r| shor::odd_part(r).1);
    let classification = match odd_part {
        None => Classification::GcdShortcut,
        Some(1) => Classification::PowerOfTwoOrder,
        Some(_) => Classification::Entangled,
    };
    Ok(SweepRecord {
        n,
        y,
        order,
        odd_part,
        g: result.g(),
        classification,
        bound: (1.0 - 1.0 / (2.0 * n as f64)).sqrt(),
    })
}

/// Every composite `N <= n_max` and every `1 < y < N - 1`, sorted by `(N, y)`.
pub fn run_fig4(n_max: u64, seed: u64, restarts: usize) -> Result<Vec<SweepRecord>> {
    if n_max < 3 {
        return Err(Error::InvalidInstance(format!("N_max = {n_max} is below 3")));
    }
    let cells: Vec<(u64, u64)> = (4..=n_max)
        .filter(|&n| !shor::is_prime(n))
        .flat_map(|n| (2..n - 1).map(move |y| (n, y)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, y)| sweep_cell(n, y, seed, restarts))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepSummary {
    pub total: usize,
    pub gcd_shortcut: usize,
    pub power_of_two_order: usize,
    pub entangled: usize,
    pub max_g: f64,
    pub bound_violations: usize,
    /// Records where `G <= threshold` disagrees with the classification.
    pub classification_mismatches: usize,
}

impl SweepSummary {
    pub fn from_records(records: &[SweepRecord]) -> Self {
        let mut s = SweepSummary { total: records.len(), ..Default::default() };
        for r in records {
            match r.classification {
                Classification::GcdShortcut => s.gcd_shortcut += 1,
                Classification::PowerOfTwoOrder => s.power_of_two_order += 1,
                Classification::Entangled => s.entangled += 1,
            }
            s.max_g = s.max_g.max(r.g);
            s.bound_violations += usize::from(r.violates_bound());
            let zero = r.g <= ZERO_G_THRESHOLD;
            s.classification_mismatches += usize::from(zero == (r.classification == Classification::Entangled));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicRecord {
    pub num_qubits: usize,
    pub period: u64,
    pub odd_part: u64,
    pub p_max: f64,
    pub g: f64,
    /// `max_t |G_t - G_0|` along the QFT trace.
    pub max_drift: f64,
}

/// `P_max` of periodic states (shift 0) and their entanglement drift through
/// the QFT, for every `L` in the range and every period that fits.
pub fn run_periodic_study(
    qubits: RangeInclusive<usize>,
    periods: &[u64],
    seed: u64,
    options: &TraceOptions,
) -> Result<Vec<PeriodicRecord>> {
    let cells: Vec<(usize, u64)> = qubits
        .flat_map(|l| periods.iter().map(move |&r| (l, r)))
        .collect();
    cells
        .par_iter()
        .map(|&(l, r)| periodic_cell(l, r, seed, options))
        .collect()
}

pub fn periodic_cell(
    num_qubits: usize,
    period: u64,
    seed: u64,
    options: &TraceOptions,
) -> Result<PeriodicRecord> {
    let spec = PeriodicStateSpec::new(num_qubits, period, 0)?;
    let state = StateVector::periodic(&spec);
    let mut r: SimRng = rng::derive(seed, &[5, num_qubits as u64, period]);
    let res = maximize(&state, &MaximizeConfig::default(), &mut r);
    let trace = trace_qft(&format!("L{num_qubits}-r{period}"), &state, options, &mut r)?;
    Ok(PeriodicRecord {
        num_qubits,
        period,
        odd_part: spec.odd_part,
        p_max: res.p_max,
        g: res.g(),
        max_drift: max_drift(&trace),
    })
}

fn comment_line<W: Write>(w: &mut W, seed: u64, what: &str) -> Result<()> {
    writeln!(w, "# shor-entanglement {VERSION} {what} seed={seed}")?;
    Ok(())
}

pub const TRACE_HEADER: &str =
    "experiment_id,gate_index,gate_kind,k,m,theta_radians,groverian_G,norm_error";
pub const SWEEP_HEADER: &str = "N,y,r,d,G,classification,bound";
pub const PERIODIC_HEADER: &str = "L,r,d,p_max,G,max_qft_drift";

pub fn write_trace_csv<W: Write>(mut w: W, records: &[TraceRecord], seed: u64) -> Result<()> {
    comment_line(&mut w, seed, "trace")?;
    writeln!(w, "{TRACE_HEADER}")?;
    for r in records {
        let (kind, k, m, theta) = match r.gate {
            None => (String::new(), String::new(), String::new(), String::new()),
            Some(g) => (
                g.kind_label().to_string(),
                g.target().to_string(),
                g.control().map(|m| m.to_string()).unwrap_or_default(),
                g.angle().map(|t| t.to_string()).unwrap_or_default(),
            ),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{:e}",
            r.experiment, r.ordinal, kind, k, m, theta, r.g, r.norm_error
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, records: &[SweepRecord], seed: u64) -> Result<()> {
    comment_line(&mut w, seed, "sweep")?;
    writeln!(w, "{SWEEP_HEADER}")?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.n,
            r.y,
            opt(r.order),
            opt(r.odd_part),
            r.g,
            r.classification.label(),
            r.bound
        )?;
    }
    Ok(())
}

pub fn write_periodic_csv<W: Write>(mut w: W, records: &[PeriodicRecord], seed: u64) -> Result<()> {
    comment_line(&mut w, seed, "periodic-study")?;
    writeln!(w, "{PERIODIC_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.num_qubits, r.period, r.odd_part, r.p_max, r.g, r.max_drift
        )?;
    }
    Ok(())
}
