//! Numerical kernels: exact rational LP, Hermitian eigendecomposition, a
//! small block SDP solver and the adversary-bound program built on it.

pub mod adversary;
pub mod bisect;
pub mod hermitian;
pub mod lp;
pub mod sdp;

pub use adversary::{adversary_sdp, witness_value, AdversaryError, SdpAdversaryInstance, SignMode};
pub use bisect::{bisect_feasibility, NoFeasiblePoint};
pub use hermitian::{
    eig_hermitian, eigenvalues, spectral_norm, trace_norm, Eigen, HermitianError, HermitianMatrix,
};
pub use lp::{lp_solve, rat, Constraint, LpOutcome, RationalLP, Rational, Relation};
