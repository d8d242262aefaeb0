use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::QsimError;
use crate::numopt::{eigenvalues, trace_norm, HermitianMatrix};

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState(DMatrix<Complex64>);

impl DensityState {
    /// Validates trace (within 1e-9), Hermiticity and eigenvalues (>= -1e-10).
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, QsimError> {
        let h = HermitianMatrix::with_tolerance(m, 1e-10)
            .map_err(|e| QsimError::NotDensity(e.to_string()))?;
        let tr: f64 = h.matrix().diagonal().iter().map(|z| z.re).sum();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(QsimError::NotDensity(format!("trace {tr}")));
        }
        let min = eigenvalues(&h).iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(QsimError::NotDensity(format!("eigenvalue {min}")));
        }
        Ok(Self(h.into_matrix()))
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn from_pure(psi: &DVector<Complex64>) -> Self {
        Self(psi * psi.adjoint())
    }

    /// Diagonal state with the given probabilities.
    pub fn from_probabilities(p: &[f64]) -> Self {
        let d = DVector::from_iterator(p.len(), p.iter().map(|&v| Complex64::new(v, 0.0)));
        Self(DMatrix::from_diagonal(&d))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// Diagonal entries in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

fn check_dims(a: usize, b: usize) -> Result<(), QsimError> {
    if a == b {
        Ok(())
    } else {
        Err(QsimError::DimensionMismatch { expected: a, got: b })
    }
}

/// `√(1 - |⟨ψ|φ⟩|²)` for unit vectors.
pub fn trace_distance_pure(psi: &DVector<Complex64>, phi: &DVector<Complex64>) -> Result<f64, QsimError> {
    check_dims(psi.len(), phi.len())?;
    let overlap = psi.dotc(phi).norm_sqr();
    Ok((1.0 - overlap).max(0.0).sqrt())
}

/// `½ ‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityState, sigma: &DensityState) -> Result<f64, QsimError> {
    check_dims(rho.dim(), sigma.dim())?;
    let diff = HermitianMatrix::with_tolerance(&rho.0 - &sigma.0, 1e-9)
        .map_err(|e| QsimError::NotDensity(e.to_string()))?;
    Ok(0.5 * trace_norm(&diff))
}

/// Traces out every factor of `dims` not listed in `keep`. Factors are
/// ordered most significant first, as in `kron(A, B)`.
pub fn partial_trace(rho: &DensityState, dims: &[usize], keep: &[usize]) -> Result<DensityState, QsimError> {
    let total: usize = dims.iter().product();
    if total != rho.dim() || dims.is_empty() || dims.contains(&0) {
        return Err(QsimError::BadFactorization(format!(
            "factors {dims:?} do not multiply to {}",
            rho.dim()
        )));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() || sorted.iter().any(|&k| k >= dims.len()) {
        return Err(QsimError::BadFactorization(format!("bad kept factors {keep:?}")));
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Split every full index into (kept index, traced index).
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
    let mut digits = vec![0usize; dims.len()];
    for full in 0..total {
        let mut rest = full;
        for k in (0..dims.len()).rev() {
            digits[k] = rest % dims[k];
            rest /= dims[k];
        }
        let ki = keep.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        let ti = traced.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        groups[ti].push((ki, full));
    }
    let mut out = DMatrix::<Complex64>::zeros(kept_dim, kept_dim);
    for g in &groups {
        for &(ka, fa) in g {
            for &(kb, fb) in g {
                out[(ka, kb)] += rho.0[(fa, fb)];
            }
        }
    }
    Ok(DensityState(out))
}

/// Completely dephases in the computational basis.
pub fn dephase(rho: &DensityState) -> DensityState {
    DensityState(DMatrix::from_diagonal(&rho.0.diagonal()))
}
