//! Gate-level quantum Fourier transform.
//!
//! `QFT = F_1 F_2 ... F_L` with `F_k = A_k B_{k,k+1} ... B_{k,L}`, operators
//! on the right acting first: `F_L` runs first and `A_1` is the final gate.
//! `A_k` is a Hadamard on qubit `k`; `B_{k,m}` is the controlled phase
//! `pi / 2^(m-k)`.
//!
//! With qubit 1 as the most significant bit this gate sequence maps `|j>` to
//! `q^{-1/2} sum_c exp(2 pi i rev(j) c / q) |c>`, where `rev` reverses the
//! bit order. [`run_qft`] therefore applies a qubit reversal before the gates
//! so the result is the plain discrete Fourier transform of the amplitudes.
//! The reversal is a qubit permutation and leaves every entanglement value
//! along the trace unchanged.

use crate::error::{Error, Result};
use crate::statevector::{GateOp, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSchedule {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl CircuitSchedule {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Gates in execution order.
    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `(ordinal, gate)` pairs; ordinals start at 1 so that 0 can denote the
    /// input state in traces.
    pub fn numbered(&self) -> impl Iterator<Item = (usize, &GateOp)> {
        self.gates.iter().enumerate().map(|(i, g)| (i + 1, g))
    }
}

pub fn build_qft_schedule(num_qubits: usize) -> Result<CircuitSchedule> {
    if num_qubits == 0 {
        return Err(Error::NoQubits);
    }
    let mut gates = Vec::with_capacity(num_qubits * (num_qubits + 1) / 2);
    for k in (1..=num_qubits).rev() {
        for m in (k + 1..=num_qubits).rev() {
            gates.push(GateOp::ControlledPhase { k, m });
        }
        gates.push(GateOp::Hadamard { k });
    }
    Ok(CircuitSchedule { num_qubits, gates })
}

/// Run the QFT on `state`, calling `trace(ordinal, gate, state)` after every
/// gate.
pub fn run_qft<F>(state: &StateVector, schedule: &CircuitSchedule, mut trace: F) -> Result<StateVector>
where
    F: FnMut(usize, &GateOp, &StateVector),
{
    if state.num_qubits() != schedule.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << schedule.num_qubits(),
            found: state.dim(),
        });
    }
    let mut out = state.clone();
    out.reverse_qubits();
    for (ordinal, gate) in schedule.numbered() {
        out.apply_gate(gate)?;
        trace(ordinal, gate, &out);
    }
    Ok(out)
}

/// [`run_qft`] without a trace hook, building the schedule on the fly.
pub fn qft(state: &StateVector) -> Result<StateVector> {
    let schedule = build_qft_schedule(state.num_qubits())?;
    run_qft(state, &schedule, |_, _, _| {})
}
