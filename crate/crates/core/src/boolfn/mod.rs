//! Partial functions over finite alphabets and the constructors built on them.
//!
//! Inputs are fixed-length strings of letters `0..q`. Internally every string is
//! packed into a base-`q` integer code with position 0 as the most significant
//! digit, so for binary functions the code of `x` is just `x` read as a binary
//! number. Positions are 0-based throughout the library; the text formats and
//! the CLI use 1-based positions.

mod catalog;
mod compose;
mod function;
mod sabotage;

pub use catalog::{parse_catalog, BuiltinSpec, Catalog, CatalogEntry, CatalogError, EntrySource};
pub use compose::{compose_full, compose_index, compose_uind, DEFAULT_DOMAIN_CAP};
pub use function::{flip, format_word, parse_word, Block, PartialAssignment, PartialFunction};
pub use sabotage::sabotage;

use thiserror::Error;

/// A single input symbol, always below the alphabet size of its function.
pub type Letter = u8;

/// Letter used for the `*` symbol of sabotaged inputs.
pub const STAR: Letter = 2;
/// Letter used for the `†` symbol of sabotaged inputs.
pub const DAGGER: Letter = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolFnError {
    #[error("input {0} is outside the domain")]
    OutOfDomain(String),
    #[error("operation requires a binary alphabet, got q = {0}")]
    AlphabetUnsupported(u8),
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("function is constant on its domain, so there are no sabotaged inputs")]
    EmptySabotageSet,
    #[error("expected a string of length {expected}, got length {got}")]
    BadLength { expected: usize, got: usize },
    #[error("letter {letter} is not below the alphabet size {q}")]
    BadLetter { letter: Letter, q: u8 },
    #[error("position {position} is out of range for length {n}")]
    BadPosition { position: usize, n: usize },
    #[error("alphabet size must be at least 2, got {0}")]
    BadAlphabet(u8),
    #[error("result needs {required} domain strings, above the enumeration cap of {cap}")]
    ArityOverflow { required: String, cap: usize },
    #[error("input {0} is listed twice")]
    DuplicateInput(String),
    #[error("block must be a nonempty set of distinct positions")]
    BadBlock,
    #[error("assignment sets position {0} twice with different letters")]
    ConflictingAssignment(usize),
}
