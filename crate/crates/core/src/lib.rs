//! Query-complexity workbench for small partial Boolean functions.

pub mod boolfn;
pub mod constructions;
pub mod experiments;
pub mod measures;
pub mod numopt;
pub mod qsim;
