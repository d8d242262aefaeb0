//! Query-complexity measures, exact where possible and certified otherwise.

mod chain;
mod classical;
mod degree;
mod quantum;
mod report;

pub use chain::{check_chain, ChainCheck, ChainReport};
pub use classical::{
    block_sensitivity, certificate_complexity, dtree_complexity, find_certificate,
    fractional_block_sensitivity, fractional_block_sensitivity_at, is_certificate,
    max_disjoint_blocks, minimal_sensitive_blocks, sensitivity, SensitiveBlockSet,
};
pub use degree::{
    approx_degree, approx_degree_fourier, approximable, approximation_error, exact_degree,
    mobius_coefficients,
};
pub use quantum::{adv, gen_adv, qd_bounds, DEFAULT_TOL};
pub use report::{MeasureReport, Provenance};

use thiserror::Error;

use crate::boolfn::{format_word, BoolFnError, Letter};
use crate::numopt::AdversaryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("measure requires a binary alphabet, got q = {0}")]
    AlphabetUnsupported(u8),
    #[error("input {} is outside the domain", format_word(.0, 10))]
    OutOfDomain(Vec<Letter>),
    #[error("measure requires a total function")]
    PartialUnsupported,
    #[error("assignment is not consistent with any domain string")]
    InconsistentAssignment,
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Function(#[from] BoolFnError),
}
