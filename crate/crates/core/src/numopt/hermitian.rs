//! Hermitian matrices and a cyclic complex Jacobi eigensolver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance for the Hermitian check.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermitianError {
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(DMatrix<Complex64>);

impl HermitianMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, HermitianError> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    /// Accepts `m` if `max |m - m†| <= tol` and stores its Hermitian part.
    pub fn with_tolerance(m: DMatrix<Complex64>, tol: f64) -> Result<Self, HermitianError> {
        if !m.is_square() {
            return Err(HermitianError::NotSquare(m.nrows(), m.ncols()));
        }
        let dev = hermitian_deviation(&m);
        if dev > tol {
            return Err(HermitianError::NotHermitian(dev));
        }
        let h = (&m + m.adjoint()).scale(0.5);
        Ok(Self(h))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self, HermitianError> {
        Self::new(m.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }
}

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..=i {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Sorted in decreasing order.
    pub values: DVector<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: DMatrix<Complex64>,
}

/// Eigendecomposition `M = V diag(λ) V†` by cyclic Jacobi rotations.
pub fn eig_hermitian(m: &HermitianMatrix) -> Eigen {
    let d = m.dim();
    let mut a = m.0.clone();
    let mut v = DMatrix::<Complex64>::identity(d, d);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 || g <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] makes a_pq vanish.
                let e = (apq / g).conj();
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (j00, j01) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
                let (j10, j11) = (-e * s, e * c);
                // A <- A J
                for k in 0..d {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * j00 + y * j10;
                    a[(k, q)] = x * j01 + y * j11;
                }
                // A <- J† A
                for k in 0..d {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = j00.conj() * x + j10.conj() * y;
                    a[(q, k)] = j01.conj() * x + j11.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V <- V J
                for k in 0..d {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * j00 + y * j10;
                    v[(k, q)] = x * j01 + y * j11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = DVector::from_iterator(d, order.iter().map(|&i| a[(i, i)].re));
    let vectors = DMatrix::from_fn(d, d, |r, c| v[(r, order[c])]);
    Eigen { values, vectors }
}

/// Eigenvalues only, decreasing.
pub fn eigenvalues(m: &HermitianMatrix) -> DVector<f64> {
    eig_hermitian(m).values
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(m: &HermitianMatrix) -> f64 {
    eigenvalues(m).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    eigenvalues(m).iter().map(|v| v.abs()).sum()
}

/// Spectral norm of a real symmetric matrix.
pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    spectral_norm(&HermitianMatrix::from_real(m).expect("symmetric input"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_pauli() {
        let id = HermitianMatrix::new(DMatrix::identity(2, 2)).unwrap();
        assert_eq!(eigenvalues(&id).as_slice(), &[1.0, 1.0]);
        let x = HermitianMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))
            .unwrap();
        let ev = eigenvalues(&x);
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_reconstructs() {
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let e = eig_hermitian(&HermitianMatrix::new(y.clone()).unwrap());
        let lam = DMatrix::from_diagonal(&e.values.map(|v| c(v, 0.0)));
        let back = &e.vectors * lam * e.vectors.adjoint();
        assert!((back - y).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(HermitianError::NotHermitian(_))));
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert_eq!(HermitianMatrix::new(m), Err(HermitianError::NotSquare(2, 3)));
    }

    #[test]
    fn degenerate_and_diagonal() {
        let m = HermitianMatrix::from_real(&DMatrix::from_diagonal_element(4, 4, 2.5)).unwrap();
        assert_eq!(spectral_norm(&m), 2.5);
        assert_eq!(trace_norm(&m), 10.0);
        let zero = HermitianMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(spectral_norm(&zero), 0.0);
    }
}
