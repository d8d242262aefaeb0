//! Dense state-vector simulation of quantum query algorithms.
//!
//! The oracle acts as `O_x |i, b, s⟩ = |i, b + x_i mod q, s⟩` on the
//! `index ⊗ answer ⊗ workspace` register layout.

mod algorithm;
mod format;
mod gates;
mod hybrid;
mod state;

pub use algorithm::{
    acceptance_probability, answer_distribution, apply_oracle, index_masses, run, run_traced,
    sample_from_masses, sample_query_position, Output, OutputSpec, QueryAlgorithm, RunTrace,
    StateVector, Step, DEFAULT_DIM_CAP, UNITARITY_TOL,
};
pub use format::{parse_algorithm, write_algorithm};
pub use gates::{
    dft, diffusion, idft, on_registers, permutation_unitary, phase, random_unitary, shift,
    unitarity_deviation, CMatrix, Gate,
};
pub use hybrid::{hybrid_check, HybridReport, StepCheck};
pub use state::{dephase, partial_trace, trace_distance, trace_distance_pure, DensityState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("U_{step} is not unitary (deviation {deviation:e})")]
    NotUnitary { step: usize, deviation: f64 },
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("bad factorization: {0}")]
    BadFactorization(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("not a permutation")]
    NotPermutation,
    #[error("no query {t} to measure in a {queries}-query algorithm")]
    NoQuery { t: usize, queries: usize },
    #[error("operation requires a binary alphabet, got q = {0}")]
    AlphabetUnsupported(usize),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("bad algorithm: {0}")]
    BadAlgorithm(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
