use rand::Rng;
use serde::Serialize;

use super::arith::{choose_register_size, find_order, gcd, is_prime, mod_pow, modexp_table};
use super::contfrac::continued_fraction_recover;
use super::qft;
use crate::error::{Error, Result};
use crate::statevector::{PeriodicStateSpec, StateVector, MAX_QUBITS};

/// Measurements tried with one base before a new one is drawn.
pub const MAX_ATTEMPTS_PER_Y: usize = 10;

/// A number to factor together with the base `y` and the register size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShorInstance {
    n: u64,
    y: u64,
    num_qubits: usize,
}

impl ShorInstance {
    pub fn new(n: u64, y: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!("N = {n} is too small")));
        }
        if is_prime(n) {
            return Err(Error::Prime(n));
        }
        if y <= 1 || y >= n - 1 {
            return Err(Error::InvalidInstance(format!("need 1 < y < N - 1, got y = {y} for N = {n}")));
        }
        let num_qubits = choose_register_size(n) as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { num_qubits, max: MAX_QUBITS });
        }
        Ok(Self { n, y, num_qubits })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// `L`, the main-register width.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// `q = 2^L`.
    pub fn q(&self) -> u64 {
        1 << self.num_qubits
    }

    pub fn is_coprime(&self) -> bool {
        gcd(self.y, self.n) == 1
    }

    pub fn order(&self) -> Option<u64> {
        find_order(self.n, self.y)
    }

    /// `y^a mod N` for every main-register index `a`.
    pub fn modexp_table(&self) -> Vec<u64> {
        modexp_table(self.n, self.y, self.q() as usize)
    }
}

/// How the auxiliary-register measurement outcome is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// Draw the outcome with its Born probability.
    Sample,
    /// Impose the outcome `z = y^l mod N` for the given shift `l`.
    Fixed(u64),
}

/// Main register after the auxiliary register collapsed onto `z`.
#[derive(Clone, Debug)]
pub struct Collapsed {
    pub z: u64,
    /// Indices `a` with `y^a = z (mod N)`, increasing.
    pub support: Vec<usize>,
    pub state: StateVector,
}

/// Collapse the main register onto the indices whose modular power equals `z`.
pub fn collapse_auxiliary(instance: &ShorInstance, z: u64) -> Result<Collapsed> {
    let support: Vec<usize> = instance
        .modexp_table()
        .into_iter()
        .enumerate()
        .filter_map(|(a, v)| (v == z).then_some(a))
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidInstance(format!(
            "{z} is not a power of {} mod {}",
            instance.y(),
            instance.n()
        )));
    }
    let state = StateVector::uniform_on(instance.num_qubits(), &support)?;
    Ok(Collapsed { z, support, state })
}

#[derive(Clone, Debug)]
pub struct PreprocessResult {
    /// Measured auxiliary value.
    pub z: u64,
    /// Smallest `l >= 0` with `y^l = z (mod N)`.
    pub shift: u64,
    /// Order of `y` modulo `N`.
    pub order: u64,
    /// `A + 1`, the number of main-register indices left after the collapse.
    pub support_len: u64,
    pub state: StateVector,
}

#[derive(Clone, Debug)]
pub enum Preprocessed {
    Periodic(PreprocessResult),
    /// `gcd(y, N) > 1` hands out a factor without any quantum step.
    NonCoprime { factor: u64 },
}

/// Prepare the equal superposition, compute `y^a mod N` into the auxiliary
/// register and measure it.
///
/// The auxiliary register is never stored as qubits: the table of modular
/// powers is computed classically, and the measurement picks a residue with
/// probability equal to its share of the `q` main-register indices.
pub fn preprocess<R: Rng + ?Sized>(
    instance: &ShorInstance,
    mode: ShiftMode,
    rng: &mut R,
) -> Result<Preprocessed> {
    let g = gcd(instance.y(), instance.n());
    if g != 1 {
        return Ok(Preprocessed::NonCoprime { factor: g });
    }
    let order = instance.order().expect("coprime base has an order");
    let table = instance.modexp_table();
    let z = match mode {
        ShiftMode::Fixed(shift) => {
            if shift >= order {
                return Err(Error::InvalidShift { shift, period: order });
            }
            table[shift as usize]
        }
        // Each of the q equally weighted main-register branches carries one
        // residue; sampling a branch uniformly realizes the Born rule.
        ShiftMode::Sample => table[rng.random_range(0..table.len())],
    };
    let shift = table.iter().position(|&v| v == z).expect("z occurs in the table") as u64;
    let spec = PeriodicStateSpec::new(instance.num_qubits(), order, shift)?;
    let state = StateVector::periodic(&spec);
    debug_assert_eq!(
        collapse_auxiliary(instance, z).map(|c| c.support.len() as u64).ok(),
        Some(spec.support_len())
    );
    Ok(Preprocessed::Periodic(PreprocessResult {
        z,
        shift,
        order,
        support_len: spec.support_len(),
        state,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptStatus {
    Factored,
    OddOrder,
    TrivialRoot,
    ApproxFailed,
    NonCoprimeShortcut,
}

impl AttemptStatus {
    pub fn label(&self) -> &'static str {
        match self {
            AttemptStatus::Factored => "factored",
            AttemptStatus::OddOrder => "odd_order",
            AttemptStatus::TrivialRoot => "trivial_root",
            AttemptStatus::ApproxFailed => "approx_failed",
            AttemptStatus::NonCoprimeShortcut => "non_coprime_shortcut",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PostprocessResult {
    pub c: u64,
    /// Convergent `(c', r)` satisfying the half-step bound, if any.
    pub convergent: Option<(u64, u64)>,
    /// The convergent's denominator passed `y^r = 1 (mod N)`.
    pub accepted: bool,
    /// `y^(r/2) mod N` when `r` is even.
    pub x: Option<u64>,
    /// `gcd(x - 1, N)` and `gcd(x + 1, N)`.
    pub candidates: Vec<u64>,
    /// Nontrivial divisors among the candidates.
    pub factors: Vec<u64>,
    pub status: AttemptStatus,
}

impl PostprocessResult {
    pub fn order(&self) -> Option<u64> {
        self.convergent.filter(|_| self.accepted).map(|(_, r)| r)
    }
}

/// Classical post-processing of a measured index `c`.
pub fn postprocess(instance: &ShorInstance, c: u64) -> PostprocessResult {
    let (n, y) = (instance.n(), instance.y());
    let mut out = PostprocessResult {
        c,
        convergent: None,
        accepted: false,
        x: None,
        candidates: Vec::new(),
        factors: Vec::new(),
        status: AttemptStatus::ApproxFailed,
    };
    out.convergent = continued_fraction_recover(c, instance.q(), n);
    let Some((_, r)) = out.convergent else {
        return out;
    };
    // A denominator that is not a period of y (c = 0, or j sharing a factor
    // with r) carries no usable order.
    if mod_pow(y, r, n) != 1 {
        return out;
    }
    out.accepted = true;
    if r % 2 == 1 {
        out.status = AttemptStatus::OddOrder;
        return out;
    }
    let x = mod_pow(y, r / 2, n);
    out.x = Some(x);
    if x == 1 || x == n - 1 {
        out.status = AttemptStatus::TrivialRoot;
        return out;
    }
    out.candidates = vec![gcd(x - 1, n), gcd(x + 1, n)];
    out.factors = out.candidates.iter().copied().filter(|&p| p > 1 && p < n).collect();
    out.factors.sort_unstable();
    out.factors.dedup();
    out.status = if out.factors.is_empty() { AttemptStatus::TrivialRoot } else { AttemptStatus::Factored };
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YStrategy {
    Fixed(u64),
    /// Draw `y` uniformly from `2..=N-2`, redrawing after failures.
    Random,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttemptLog {
    pub y: u64,
    pub l: Option<u64>,
    pub c: Option<u64>,
    pub status: AttemptStatus,
    pub factors: Vec<u64>,
    #[serde(skip)]
    pub postprocess: Option<PostprocessResult>,
}

#[derive(Clone, Debug)]
pub struct FactorReport {
    pub n: u64,
    /// `(p, N / p)` with `p` the smallest factor found.
    pub factors: Option<(u64, u64)>,
    pub attempts: Vec<AttemptLog>,
}

impl FactorReport {
    pub fn attempts_json(&self) -> String {
        serde_json::to_string_pretty(&self.attempts).expect("plain JSON")
    }
}

/// Run the whole algorithm until a factor is found or `max_attempts`
/// measurements have been spent.
///
/// Odd orders and trivial roots are properties of `y`, so they end the use
/// of that base immediately. Failed continued-fraction recoveries (including
/// `c = 0`) are retried with the same base up to [`MAX_ATTEMPTS_PER_Y`]
/// times.
pub fn factor<R: Rng + ?Sized>(
    n: u64,
    strategy: YStrategy,
    max_attempts: usize,
    rng: &mut R,
) -> Result<FactorReport> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("N = {n} is too small")));
    }
    if is_prime(n) {
        return Err(Error::Prime(n));
    }
    if let YStrategy::Fixed(y) = strategy {
        ShorInstance::new(n, y)?;
    }
    let mut report = FactorReport { n, factors: None, attempts: Vec::new() };
    let mut current: Option<(ShorInstance, usize)> = None;

    while report.attempts.len() < max_attempts {
        let (instance, used) = match current {
            Some((inst, used)) if used < MAX_ATTEMPTS_PER_Y => (inst, used),
            Some(_) if matches!(strategy, YStrategy::Fixed(_)) => break,
            _ => {
                let y = match strategy {
                    YStrategy::Fixed(y) => y,
                    YStrategy::Random => rng.random_range(2..=n - 2),
                };
                (ShorInstance::new(n, y)?, 0)
            }
        };
        current = Some((instance, used + 1));

        let log = match preprocess(&instance, ShiftMode::Sample, rng)? {
            Preprocessed::NonCoprime { factor } => AttemptLog {
                y: instance.y(),
                l: None,
                c: None,
                status: AttemptStatus::NonCoprimeShortcut,
                factors: vec![factor],
                postprocess: None,
            },
            Preprocessed::Periodic(pre) => {
                let transformed = qft::qft(&pre.state)?;
                let (c, _) = transformed.measure_all(rng)?;
                let post = postprocess(&instance, c);
                AttemptLog {
                    y: instance.y(),
                    l: Some(pre.shift),
                    c: Some(c),
                    status: post.status,
                    factors: post.factors.clone(),
                    postprocess: Some(post),
                }
            }
        };
        let status = log.status;
        if let Some(&p) = log.factors.iter().min() {
            report.factors = Some((p.min(n / p), p.max(n / p)));
        }
        report.attempts.push(log);
        match status {
            AttemptStatus::Factored | AttemptStatus::NonCoprimeShortcut => break,
            AttemptStatus::OddOrder | AttemptStatus::TrivialRoot => {
                current = current.map(|(inst, _)| (inst, MAX_ATTEMPTS_PER_Y));
            }
            AttemptStatus::ApproxFailed => {}
        }
    }
    Ok(report)
}
