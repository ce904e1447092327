//! State-vector simulation of Shor's factoring algorithm, instrumented with
//! the Groverian entanglement measure.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevector`]: dense L-qubit register, Hadamard and controlled-phase
//!   gates, sub-register measurement and the state families used throughout.
//! - [`shor`]: register sizing, pre-processing to a periodic state, the QFT
//!   gate schedule with a per-gate trace hook, and classical post-processing.
//! - [`groverian`]: `P_max` and `G = sqrt(1 - P_max)` by analytic per-qubit
//!   coordinate ascent, plus a brute-force grid oracle for small registers.
//! - [`experiments`]: drivers producing per-gate entanglement traces, the
//!   `(N, y)` sweep and the periodic-state study as CSV datasets.
//! - [`cli`]: the command-line surface.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod groverian;
pub mod rng;
pub mod shor;
pub mod statevector;

pub use error::{Error, Result};
pub use groverian::{maximize, maximize_from, GroverianResult, MaximizeConfig, ProductAnsatz};
pub use statevector::{GateOp, PeriodicStateSpec, StateVector};
