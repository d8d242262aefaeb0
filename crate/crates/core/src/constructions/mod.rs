//! Executable reductions and algorithms: distinguishers, QSZK pairs, the
//! certificate-finding algorithm and the classical sabotage transforms.

mod certfinder;
mod classical;
mod distinguish;
pub mod library;
mod qszk;
mod tree;

pub use certfinder::{
    certificate_finder_p, repetitions, zero_error_wrapper, CertificateRun, ZeroErrorRun,
    REPETITION_CONSTANT,
};
pub use classical::{
    cross_tv, expected_cost, rd_to_rs_transform, rs_to_rd_transform, total_variation,
    validate_zero_error, HitReport, RdTransform,
};
pub use distinguish::{
    acceptance_probabilities, collision_distinguisher, distinguisher_outputs, q_to_qd,
    verify_distinguisher, DistinguisherOutput, DistinguisherVerdict, DEFAULT_THRESHOLD,
};
pub use qszk::{
    check_qszk, complement_purifications, q_to_qszk, qszk_complement, qszk_to_qd,
    ComplementInput, ComplementWitness, QszkCheck, QszkPair,
};
pub use tree::{
    parse_randomized, parse_tree, run_randomized, run_tree, DecisionTree, RandomizedAlgorithm,
};

use thiserror::Error;

use crate::boolfn::{format_word, BoolFnError, Letter};
use crate::measures::MeasureError;
use crate::qsim::QsimError;

/// Guard for comparisons against exact constants such as 2/3 and 1/6.
pub const FLOAT_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("acceptance probability {p} on input {input} breaks the bounded-error promise")]
    NotBoundedError { input: String, p: f64 },
    #[error("no output state for input {0}")]
    IncompleteCoverage(String),
    #[error("input {input} (value {value}) has pair distance {distance}, breaking the QSZK promise")]
    QszkPromiseViolated { input: String, value: bool, distance: f64 },
    #[error("invalid register specification: {0}")]
    RegisterSpecInvalid(String),
    #[error("input {input} has pair distance {distance}, neither 0 nor 1")]
    NotIdeal { input: String, distance: f64 },
    #[error("no certificate after {batches} batches")]
    BudgetExhausted { batches: usize },
    #[error("algorithm errs on input {0}")]
    NotZeroError(String),
    #[error("inputs {x} and {y} have total variation distance {tv} below 1/6")]
    DistinguishingPromiseViolated { x: String, y: String, tv: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Function(#[from] BoolFnError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

fn word(x: &[Letter], q: u8) -> String {
    format_word(x, q)
}
