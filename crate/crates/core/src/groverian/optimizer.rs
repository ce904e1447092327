use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{MaximizeConfig, ProductAnsatz};
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Outcome of optimizing one qubit's angles against split sums `(c, d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleUpdate {
    Updated { theta: f64, gamma: f64, fidelity: f64 },
    /// `c = d = 0`: every angle choice is optimal, the current ones are kept.
    Degenerate,
}

/// Analytic maximizer of `|c cos theta + d e^{i gamma} sin theta|^2`.
///
/// The maximum is `|c|^2 + |d|^2`, reached at
/// `cos theta = |c| / sqrt(|c|^2 + |d|^2)` and `gamma = arg c - arg d`,
/// with `gamma` reduced to `[0, 2 pi)`.
pub fn optimal_angles(c: Complex64, d: Complex64) -> AngleUpdate {
    let fidelity = c.norm_sqr() + d.norm_sqr();
    if fidelity == 0.0 {
        return AngleUpdate::Degenerate;
    }
    let theta = (c.norm() / fidelity.sqrt()).clamp(0.0, 1.0).acos();
    let mut gamma = (c.arg() - d.arg()).rem_euclid(2.0 * PI);
    if gamma >= 2.0 * PI {
        gamma = 0.0;
    }
    AngleUpdate::Updated { theta, gamma, fidelity }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepReport {
    /// `|f|^2` at the end of the run.
    pub fidelity: f64,
    pub sweeps: usize,
    pub degenerate_updates: usize,
    /// Gain fell below tolerance before the sweep cap.
    pub converged: bool,
}

/// Coordinate-ascent state for one restart.
///
/// The optimizer works with the conjugated amplitudes `w_j = conj(a_j)`, so
/// that `conj(f) = sum_j b_j^(1) ... b_j^(L) w_j` with
/// `b_j^(k) = cos theta_k` if bit `j_k` is 0 and `e^{i gamma_k} sin theta_k`
/// otherwise. Holding every qubit except `k` fixed,
/// `conj(f) = c_k cos theta_k + d_k e^{i gamma_k} sin theta_k`, where `c_k`
/// (`d_k`) sums the remaining products over indices with `j_k = 0` (`1`).
pub struct OptimizerState<'a> {
    conj: Cow<'a, [Complex64]>,
    num_qubits: usize,
    ansatz: ProductAnsatz,
    fidelity: f64,
    /// `suffix[k]` holds `prod_{k' > k} b^(k')` indexed by the low `L - k` bits.
    suffix: Vec<Vec<Complex64>>,
    prefix: Vec<Complex64>,
    split: Vec<(Complex64, Complex64)>,
    degenerate_updates: usize,
}

impl<'a> OptimizerState<'a> {
    pub fn new(state: &StateVector, ansatz: ProductAnsatz) -> Result<OptimizerState<'static>> {
        if state.num_qubits() != ansatz.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: state.num_qubits(),
                found: ansatz.num_qubits(),
            });
        }
        let conj: Vec<Complex64> = state.amplitudes().iter().map(|a| a.conj()).collect();
        Ok(OptimizerState::build(Cow::Owned(conj), ansatz))
    }

    pub(crate) fn from_conjugated(conj: &'a [Complex64], ansatz: ProductAnsatz) -> Self {
        Self::build(Cow::Borrowed(conj), ansatz)
    }

    fn build(conj: Cow<'a, [Complex64]>, ansatz: ProductAnsatz) -> Self {
        let num_qubits = ansatz.num_qubits();
        debug_assert_eq!(conj.len(), 1 << num_qubits);
        let suffix = (0..=num_qubits).map(|k| vec![Complex64::default(); 1 << (num_qubits - k)]).collect();
        let mut opt = Self {
            conj,
            num_qubits,
            ansatz,
            fidelity: 0.0,
            suffix,
            prefix: vec![Complex64::default(); 1 << (num_qubits - 1)],
            split: vec![Default::default(); num_qubits],
            degenerate_updates: 0,
        };
        opt.fidelity = opt.current_overlap_conj().norm_sqr();
        opt
    }

    pub fn ansatz(&self) -> &ProductAnsatz {
        &self.ansatz
    }

    pub fn into_ansatz(self) -> ProductAnsatz {
        self.ansatz
    }

    /// Current `|f|^2`.
    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    pub fn degenerate_updates(&self) -> usize {
        self.degenerate_updates
    }

    /// Split sums `(c_k, d_k)` seen by the most recent sweep, one per qubit.
    pub fn cached_split_sums(&self) -> &[(Complex64, Complex64)] {
        &self.split
    }

    fn current_overlap_conj(&self) -> Complex64 {
        let mut work = self.conj.to_vec();
        for k in 1..=self.num_qubits {
            let [b0, b1] = self.ansatz.factors(k);
            let half = work.len() / 2;
            for i in 0..half {
                work[i] = b0 * work[i] + b1 * work[half + i];
            }
            work.truncate(half);
        }
        work[0]
    }

    /// Split sums `(c_k, d_k)` for qubit `k` under the current angles,
    /// computed by a fresh contraction.
    pub fn split_sums(&self, k: usize) -> Result<(Complex64, Complex64)> {
        self.check_qubit(k)?;
        let mut work = self.conj.to_vec();
        // Qubits above k: fold the high half onto the low half.
        for q in 1..k {
            let [b0, b1] = self.ansatz.factors(q);
            let half = work.len() / 2;
            for i in 0..half {
                work[i] = b0 * work[i] + b1 * work[half + i];
            }
            work.truncate(half);
        }
        // Qubits below k: fold adjacent pairs.
        for q in (k + 1..=self.num_qubits).rev() {
            let [b0, b1] = self.ansatz.factors(q);
            let half = work.len() / 2;
            for i in 0..half {
                work[i] = b0 * work[2 * i] + b1 * work[2 * i + 1];
            }
            work.truncate(half);
        }
        Ok((work[0], work[1]))
    }

    fn check_qubit(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: k, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    fn apply(&mut self, k: usize, c: Complex64, d: Complex64) -> AngleUpdate {
        self.split[k - 1] = (c, d);
        let update = optimal_angles(c, d);
        match update {
            AngleUpdate::Updated { theta, gamma, fidelity } => {
                debug_assert!(
                    fidelity >= self.fidelity - 1e-10,
                    "ascent violated at qubit {k}: {} -> {fidelity}",
                    self.fidelity
                );
                self.ansatz.set(k, theta, gamma);
                self.fidelity = fidelity;
            }
            AngleUpdate::Degenerate => self.degenerate_updates += 1,
        }
        update
    }

    /// Optimize qubit `k` alone, holding the others fixed.
    pub fn update_qubit(&mut self, k: usize) -> Result<AngleUpdate> {
        let (c, d) = self.split_sums(k)?;
        Ok(self.apply(k, c, d))
    }

    /// One full round `k = 1..L` of single-qubit updates. Returns the new `|f|^2`.
    ///
    /// The suffix products of the not-yet-updated qubits are built once at
    /// the start; the prefix contraction of the already-updated qubits is
    /// folded in place as the sweep advances, so a whole sweep is `O(2^L)`.
    pub fn sweep(&mut self) -> f64 {
        let n = self.num_qubits;
        self.suffix[n][0] = Complex64::new(1.0, 0.0);
        for k in (1..n).rev() {
            let [b0, b1] = self.ansatz.factors(k + 1);
            let (lower, upper) = self.suffix.split_at_mut(k + 1);
            let src = &upper[0];
            let dst = &mut lower[k];
            let len = src.len();
            for i in 0..len {
                dst[i] = b0 * src[i];
                dst[len + i] = b1 * src[i];
            }
        }

        for k in 1..=n {
            let half = 1usize << (n - k);
            let suffix = &self.suffix[k];
            let (lo, hi) = if k == 1 {
                self.conj.split_at(half)
            } else {
                self.prefix[..2 * half].split_at(half)
            };
            let mut c = Complex64::default();
            let mut d = Complex64::default();
            for i in 0..half {
                c += lo[i] * suffix[i];
                d += hi[i] * suffix[i];
            }
            self.apply(k, c, d);

            if k < n {
                let [b0, b1] = self.ansatz.factors(k);
                if k == 1 {
                    let (lo, hi) = self.conj.split_at(half);
                    for i in 0..half {
                        self.prefix[i] = b0 * lo[i] + b1 * hi[i];
                    }
                } else {
                    for i in 0..half {
                        self.prefix[i] = b0 * self.prefix[i] + b1 * self.prefix[half + i];
                    }
                }
            }
        }
        self.fidelity
    }

    /// Sweep until the per-sweep gain drops below `config.tolerance` or the
    /// sweep cap is reached.
    pub fn run(&mut self, config: &MaximizeConfig) -> SweepReport {
        let mut sweeps = 0;
        let mut converged = false;
        while sweeps < config.max_sweeps {
            let before = self.fidelity;
            let after = self.sweep();
            sweeps += 1;
            if after - before < config.tolerance {
                converged = true;
                break;
            }
        }
        SweepReport {
            fidelity: self.fidelity,
            sweeps,
            degenerate_updates: self.degenerate_updates,
            converged,
        }
    }
}
