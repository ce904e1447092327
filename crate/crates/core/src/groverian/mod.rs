//! Groverian entanglement measure `G = sqrt(1 - P_max)`, where `P_max` is
//! the largest squared overlap of a state with any product state.
//!
//! `P_max` is found by coordinate ascent: each qubit's pair of angles is set
//! to its analytic optimum while the others are held fixed, sweeping over
//! the qubits until the gain per sweep drops below a tolerance. Several
//! random starting points are tried and the best optimum is kept.

mod oracle;
mod optimizer;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::statevector::StateVector;

pub use oracle::{brute_force_pmax, ORACLE_MAX_QUBITS};
pub use optimizer::{optimal_angles, AngleUpdate, OptimizerState, SweepReport};

/// Per-qubit angles `(theta_k, gamma_k)` of the product state
/// `(x)_k (cos theta_k |0> + e^{i gamma_k} sin theta_k |1>)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductAnsatz {
    theta: Vec<f64>,
    gamma: Vec<f64>,
}

impl ProductAnsatz {
    pub fn new(theta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if theta.len() != gamma.len() {
            return Err(Error::DimensionMismatch { expected: theta.len(), found: gamma.len() });
        }
        if theta.is_empty() {
            return Err(Error::NoQubits);
        }
        Ok(Self { theta, gamma })
    }

    /// Angles drawn uniformly: `theta` on `[0, pi)`, `gamma` on `[0, 2 pi)`.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let mut theta = Vec::with_capacity(num_qubits);
        let mut gamma = Vec::with_capacity(num_qubits);
        for _ in 0..num_qubits {
            theta.push(rng.random_range(0.0..PI));
            gamma.push(rng.random_range(0.0..2.0 * PI));
        }
        Self { theta, gamma }
    }

    pub fn num_qubits(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Components `(cos theta_k, e^{i gamma_k} sin theta_k)` of qubit `k` (1-based).
    pub fn factors(&self, k: usize) -> [Complex64; 2] {
        let (t, g) = (self.theta[k - 1], self.gamma[k - 1]);
        [Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), g)]
    }

    /// Replace factor `k` by `H` applied to it, so that the overlap of the
    /// new ansatz with `H_k |psi>` equals the old overlap with `|psi>`.
    pub fn apply_hadamard(&mut self, k: usize) {
        let [a, b] = self.factors(k);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = ((a + b) * s, (a - b) * s);
        let gamma = (b.arg() - a.arg()).rem_euclid(2.0 * PI);
        self.set(k, b.norm().atan2(a.norm()), gamma);
    }

    /// Counterpart of [`StateVector::reverse_qubits`].
    pub fn reverse_qubits(&mut self) {
        self.theta.reverse();
        self.gamma.reverse();
    }

    pub(crate) fn set(&mut self, k: usize, theta: f64, gamma: f64) {
        self.theta[k - 1] = theta;
        self.gamma[k - 1] = gamma;
    }
}

/// Overlap `f = <e_1 (x) ... (x) e_L | psi>` in `O(2^L)`.
pub fn overlap(state: &StateVector, ansatz: &ProductAnsatz) -> Result<Complex64> {
    if state.num_qubits() != ansatz.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            found: ansatz.num_qubits(),
        });
    }
    // Contract qubit 1 (the most significant bit) first: the two halves of
    // the working vector are its |0> and |1> slices.
    let mut work = state.amplitudes().to_vec();
    for k in 1..=ansatz.num_qubits() {
        let [e0, e1] = ansatz.factors(k);
        let (e0, e1) = (e0.conj(), e1.conj());
        let half = work.len() / 2;
        for i in 0..half {
            work[i] = e0 * work[i] + e1 * work[half + i];
        }
        work.truncate(half);
    }
    Ok(work[0])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximizeConfig {
    pub restarts: usize,
    /// Stop a restart once a full sweep gains less than this in `|f|^2`.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Restarts within this distance of the best optimum count as agreeing.
    pub agreement: f64,
}

impl MaximizeConfig {
    pub const DEFAULT_RESTARTS: usize = 20;
    /// Reduced restart count used inside traces and sweeps.
    pub const SWEEP_RESTARTS: usize = 8;

    pub fn with_restarts(restarts: usize) -> Self {
        Self { restarts, ..Self::default() }
    }
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        Self {
            restarts: Self::DEFAULT_RESTARTS,
            tolerance: 1e-12,
            max_sweeps: 1000,
            agreement: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroverianResult {
    /// Maximal squared overlap with a product state, clamped to `[0, 1]`.
    pub p_max: f64,
    pub best: ProductAnsatz,
    /// Optimum reached by each restart, in restart order.
    pub restart_optima: Vec<f64>,
    pub sweeps_per_restart: Vec<usize>,
    /// `true` if at least half of the restarts agree with the best optimum.
    pub converged: bool,
    /// Max minus min of the restart optima.
    pub spread: f64,
    /// Updates skipped because both split sums vanished.
    pub degenerate_updates: usize,
}

impl GroverianResult {
    pub fn g(&self) -> f64 {
        (1.0 - self.p_max).sqrt()
    }

    pub fn restarts(&self) -> usize {
        self.restart_optima.len()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            p_max: f64,
            g: f64,
            theta: &'a [f64],
            gamma: &'a [f64],
            restarts: usize,
            converged: bool,
            spread: f64,
        }
        serde_json::to_string(&Out {
            p_max: self.p_max,
            g: self.g(),
            theta: self.best.theta(),
            gamma: self.best.gamma(),
            restarts: self.restarts(),
            converged: self.converged,
            spread: self.spread,
        })
        .expect("plain numeric JSON")
    }
}

/// Maximize the overlap of `state` with product states using
/// `config.restarts` random starting points drawn from `rng`.
///
/// Restarts run in parallel; each gets its own seed drawn up front from
/// `rng`, so the result does not depend on thread scheduling.
pub fn maximize<R: Rng + ?Sized>(
    state: &StateVector,
    config: &MaximizeConfig,
    rng: &mut R,
) -> GroverianResult {
    maximize_from(state, config, &[], rng)
}

/// [`maximize`] with extra starting points tried after the random ones.
/// Their optima are reported after the random restarts' optima.
pub fn maximize_from<R: Rng + ?Sized>(
    state: &StateVector,
    config: &MaximizeConfig,
    warm_starts: &[ProductAnsatz],
    rng: &mut R,
) -> GroverianResult {
    let num_qubits = state.num_qubits();
    let seeds: Vec<u64> = (0..config.restarts.max(1)).map(|_| rng.random()).collect();
    let mut starts: Vec<Option<&ProductAnsatz>> = vec![None; seeds.len()];
    starts.extend(warm_starts.iter().filter(|a| a.num_qubits() == num_qubits).map(Some));
    let restarts = starts.len();
    let conj: Vec<Complex64> = state.amplitudes().iter().map(|a| a.conj()).collect();

    let runs: Vec<(ProductAnsatz, SweepReport)> = starts
        .par_iter()
        .enumerate()
        .map(|(i, warm)| {
            let start = match warm {
                Some(a) => (*a).clone(),
                None => ProductAnsatz::random(num_qubits, &mut rng::from_seed(seeds[i])),
            };
            let mut opt = OptimizerState::from_conjugated(&conj, start);
            let report = opt.run(config);
            (opt.into_ansatz(), report)
        })
        .collect();

    let optima: Vec<f64> = runs.iter().map(|(_, r)| r.fidelity).collect();
    let best_idx = optima
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > optima[best] { i } else { best });
    let best_val = optima[best_idx];
    let worst = optima.iter().copied().fold(f64::INFINITY, f64::min);
    let agreeing = optima.iter().filter(|&&v| best_val - v <= config.agreement).count();

    GroverianResult {
        p_max: best_val.clamp(0.0, 1.0),
        best: runs[best_idx].0.clone(),
        sweeps_per_restart: runs.iter().map(|(_, r)| r.sweeps).collect(),
        degenerate_updates: runs.iter().map(|(_, r)| r.degenerate_updates).sum(),
        restart_optima: optima,
        converged: 2 * agreeing >= restarts,
        spread: best_val - worst,
    }
}

/// Convenience: `G` of `state` with the given restart count.
pub fn groverian<R: Rng + ?Sized>(state: &StateVector, restarts: usize, rng: &mut R) -> f64 {
    maximize(state, &MaximizeConfig::with_restarts(restarts), rng).g()
}
