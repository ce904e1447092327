//! Shor's factoring pipeline: register sizing, pre-processing to a periodic
//! state, QFT, measurement and classical post-processing.

pub mod arith;
pub mod contfrac;
mod pipeline;
pub mod qft;

pub use arith::{choose_register_size, find_order, gcd, is_prime, mod_pow, modexp_table, odd_part};
pub use contfrac::continued_fraction_recover;
pub use pipeline::{
    collapse_auxiliary, factor, postprocess, preprocess, AttemptLog, AttemptStatus, Collapsed,
    FactorReport, PostprocessResult, PreprocessResult, Preprocessed, ShiftMode, ShorInstance,
    YStrategy, MAX_ATTEMPTS_PER_Y,
};
pub use qft::{build_qft_schedule, qft, run_qft, CircuitSchedule};
