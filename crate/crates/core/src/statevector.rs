//! Dense state vector of an L-qubit register.
//!
//! Qubit `k` (1-based) is the k-th most significant bit of the basis index,
//! so for `L = 3` the index `j = 0b100` has qubit 1 set. Every module in the
//! crate uses this convention.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groverian::ProductAnsatz;

/// Largest register the simulator will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Tolerance on `|norm^2 - 1|` for externally supplied amplitudes.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// A single circuit element. Qubit indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Hadamard { k: usize },
    /// Phase `pi / 2^(m-k)` on basis states where qubits `k` and `m` are both 1.
    ControlledPhase { k: usize, m: usize },
}

impl GateOp {
    pub fn hadamard(k: usize) -> Self {
        GateOp::Hadamard { k }
    }

    pub fn controlled_phase(k: usize, m: usize) -> Result<Self> {
        if k == 0 || m <= k {
            return Err(Error::InvalidGate { k, m });
        }
        Ok(GateOp::ControlledPhase { k, m })
    }

    pub fn target(&self) -> usize {
        match *self {
            GateOp::Hadamard { k } | GateOp::ControlledPhase { k, .. } => k,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            GateOp::Hadamard { .. } => None,
            GateOp::ControlledPhase { m, .. } => Some(m),
        }
    }

    /// Phase angle in radians; `None` for a Hadamard.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::Hadamard { .. } => None,
            GateOp::ControlledPhase { k, m } => Some(PI / 2f64.powi((m - k) as i32)),
        }
    }

    pub fn is_hadamard(&self) -> bool {
        matches!(self, GateOp::Hadamard { .. })
    }

    /// Short kind label used in trace files.
    pub fn kind_label(&self) -> &'static str {
        match self {
            GateOp::Hadamard { .. } => "H",
            GateOp::ControlledPhase { .. } => "CP",
        }
    }

    fn check(&self, num_qubits: usize) -> Result<()> {
        let highest = self.control().unwrap_or_else(|| self.target());
        let k = self.target();
        if k == 0 || k > num_qubits {
            return Err(Error::QubitOutOfRange { qubit: k, num_qubits });
        }
        if highest > num_qubits {
            return Err(Error::QubitOutOfRange { qubit: highest, num_qubits });
        }
        if let GateOp::ControlledPhase { k, m } = *self {
            if m <= k {
                return Err(Error::InvalidGate { k, m });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Hadamard { k } => write!(f, "H({k})"),
            GateOp::ControlledPhase { k, m } => write!(f, "CP({k},{m})"),
        }
    }
}

/// Parameters of the periodic state `sum_m |shift + m*period>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicStateSpec {
    pub num_qubits: usize,
    pub period: u64,
    pub shift: u64,
    /// `M` in `period = 2^M * d`.
    pub two_exponent: u32,
    /// Odd part `d` of the period.
    pub odd_part: u64,
}

impl PeriodicStateSpec {
    pub fn new(num_qubits: usize, period: u64, shift: u64) -> Result<Self> {
        check_qubits(num_qubits)?;
        let size = 1u64 << num_qubits;
        if period == 0 || period > size {
            return Err(Error::InvalidPeriod { period, size });
        }
        if shift >= period {
            return Err(Error::InvalidShift { shift, period });
        }
        let two_exponent = period.trailing_zeros();
        Ok(Self {
            num_qubits,
            period,
            shift,
            two_exponent,
            odd_part: period >> two_exponent,
        })
    }

    /// Indices carrying amplitude, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = u64> {
        let size = 1u64 << self.num_qubits;
        (self.shift..size).step_by(self.period as usize)
    }

    /// `A + 1`, the number of support points.
    pub fn support_len(&self) -> u64 {
        let size = 1u64 << self.num_qubits;
        (size - 1 - self.shift) / self.period + 1
    }
}

fn check_qubits(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        Err(Error::NoQubits)
    } else if num_qubits > MAX_QUBITS {
        Err(Error::TooManyQubits { num_qubits, max: MAX_QUBITS })
    } else {
        Ok(())
    }
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn equal_superposition(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self { num_qubits, amplitudes: vec![a; dim] })
    }

    /// Uniform positive amplitudes on `shift, shift + period, ...` below `2^L`.
    pub fn periodic(spec: &PeriodicStateSpec) -> Self {
        let dim = 1usize << spec.num_qubits;
        let a = Complex64::new((spec.support_len() as f64).sqrt().recip(), 0.0);
        let mut amplitudes = vec![ZERO; dim];
        for j in spec.support() {
            amplitudes[j as usize] = a;
        }
        Self { num_qubits: spec.num_qubits, amplitudes }
    }

    /// Uniform superposition over an arbitrary set of basis indices.
    pub fn uniform_on(num_qubits: usize, support: &[usize]) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if support.is_empty() {
            return Err(Error::EmptySubset);
        }
        let a = Complex64::new((support.len() as f64).sqrt().recip(), 0.0);
        let mut amplitudes = vec![ZERO; dim];
        for &j in support {
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            amplitudes[j] = a;
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Tensor product of the single-qubit states described by `ansatz`.
    pub fn product(ansatz: &ProductAnsatz) -> Result<Self> {
        let num_qubits = ansatz.num_qubits();
        check_qubits(num_qubits)?;
        let mut amplitudes = Vec::with_capacity(1 << num_qubits);
        amplitudes.push(ONE);
        for k in 1..=num_qubits {
            let [e0, e1] = ansatz.factors(k);
            let prev = std::mem::take(&mut amplitudes);
            amplitudes = prev.iter().flat_map(|&v| [v * e0, v * e1]).collect();
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Random product state with `theta_k` uniform on `[0, pi)` and
    /// `gamma_k` uniform on `[0, 2 pi)`. Returns the generating angles.
    pub fn random_product<R: Rng + ?Sized>(
        num_qubits: usize,
        rng: &mut R,
    ) -> Result<(Self, ProductAnsatz)> {
        check_qubits(num_qubits)?;
        let mut theta = Vec::with_capacity(num_qubits);
        let mut gamma = Vec::with_capacity(num_qubits);
        for _ in 0..num_qubits {
            theta.push(rng.random_range(0.0..PI));
            gamma.push(rng.random_range(0.0..2.0 * PI));
        }
        let ansatz = ProductAnsatz::new(theta, gamma)?;
        Ok((Self::product(&ansatz)?, ansatz))
    }

    /// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random_isotropic<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amplitudes = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let mut state = Self { num_qubits, amplitudes };
        state.renormalize();
        Ok(state)
    }

    /// Build a state from raw amplitudes. The length must be a power of two
    /// (at least 2) and the norm within [`INPUT_NORM_TOLERANCE`] of one.
    /// Amplitudes off by more than rounding are rescaled to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut state = Self { num_qubits, amplitudes };
        let err = state.norm_error();
        if err > INPUT_NORM_TOLERANCE {
            return Err(Error::NotNormalized(err));
        }
        if err > 1e-14 {
            state.renormalize();
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|norm^2 - 1|`.
    pub fn norm_error(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn renormalize(&mut self) {
        let scale = self.norm_sqr().sqrt().recip();
        for a in &mut self.amplitudes {
            *a *= scale;
        }
    }

    /// Bit mask of qubit `k` inside a basis index.
    #[inline]
    pub fn qubit_mask(&self, k: usize) -> usize {
        1 << (self.num_qubits - k)
    }

    /// Apply `gate` in place.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.check(self.num_qubits)?;
        match *gate {
            GateOp::Hadamard { k } => {
                let mask = self.qubit_mask(k);
                let h = FRAC_1_SQRT_2;
                for block in self.amplitudes.chunks_exact_mut(2 * mask) {
                    let (lo, hi) = block.split_at_mut(mask);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = (x + y) * h;
                        *b = (x - y) * h;
                    }
                }
            }
            GateOp::ControlledPhase { k, m } => {
                let both = self.qubit_mask(k) | self.qubit_mask(m);
                let phase = Complex64::from_polar(1.0, gate.angle().unwrap_or_default());
                for (j, a) in self.amplitudes.iter_mut().enumerate() {
                    if j & both == both {
                        *a *= phase;
                    }
                }
            }
        }
        Ok(())
    }

    /// Consuming variant of [`apply_gate`](Self::apply_gate).
    pub fn with_gate(mut self, gate: &GateOp) -> Result<Self> {
        self.apply_gate(gate)?;
        Ok(self)
    }

    /// Reverse the order of the qubits: qubit `k` becomes qubit `L + 1 - k`.
    pub fn reverse_qubits(&mut self) {
        let shift = usize::BITS - self.num_qubits as u32;
        for j in 0..self.amplitudes.len() {
            let r = j.reverse_bits() >> shift;
            if j < r {
                self.amplitudes.swap(j, r);
            }
        }
    }

    /// Measure the listed qubits in the computational basis.
    ///
    /// The outcome packs the measured bits in the order given, first listed
    /// qubit most significant. The returned state is the renormalized
    /// post-measurement state; amplitudes inconsistent with the outcome are
    /// exactly zero.
    pub fn measure_subregister<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(u64, StateVector)> {
        if qubits.is_empty() {
            return Err(Error::EmptySubset);
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q == 0 || q > self.num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        let masks: Vec<usize> = qubits.iter().map(|&q| self.qubit_mask(q)).collect();
        let pattern = |j: usize| -> u64 {
            masks
                .iter()
                .fold(0u64, |acc, &mask| (acc << 1) | u64::from(j & mask != 0))
        };

        let mut weights = vec![0.0f64; 1 << qubits.len()];
        for (j, a) in self.amplitudes.iter().enumerate() {
            weights[pattern(j) as usize] += a.norm_sqr();
        }
        let total: f64 = weights.iter().sum();
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut outcome = None;
        for (p, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            outcome = Some(p as u64);
            if u < acc {
                break;
            }
        }
        let outcome = outcome.expect("normalized state has a positive-weight outcome");

        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, &a)| if pattern(j) == outcome { a } else { ZERO })
            .collect();
        let mut collapsed = StateVector { num_qubits: self.num_qubits, amplitudes };
        collapsed.renormalize();
        Ok((outcome, collapsed))
    }

    /// Measure every qubit; the outcome is the basis index.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(u64, StateVector)> {
        let all: Vec<usize> = (1..=self.num_qubits).collect();
        self.measure_subregister(&all, rng)
    }

    /// JSON text `{"num_qubits": L, "amplitudes": [[re, im], ...]}` with every
    /// component written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(48 * self.dim() + 32);
        out.push_str(&format!("{{\"num_qubits\":{},\"amplitudes\":[", self.num_qubits));
        for (j, a) in self.amplitudes.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{:e},{:e}]", a.re, a.im));
        }
        out.push_str("]}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        let amplitudes: Vec<Complex64> = file
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if file.num_qubits > MAX_QUBITS || dim != 1usize << file.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1usize.checked_shl(file.num_qubits as u32).unwrap_or(0),
                found: dim,
            });
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        Ok(())
    }

    pub fn read_json<Rd: Read>(mut r: Rd) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Deserialize)]
struct StateFile {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}
