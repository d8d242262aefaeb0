//! Named unitaries over the `index ⊗ answer ⊗ workspace` layout.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::QsimError;

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `F[j,k] = ω^{jk}/√d` with `ω = e^{2πi/d}`.
pub fn dft(d: usize) -> CMatrix {
    let s = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |j, k| Complex64::from_polar(s, 2.0 * PI * ((j * k) % d) as f64 / d as f64))
}

pub fn idft(d: usize) -> CMatrix {
    dft(d).adjoint()
}

/// `2|s⟩⟨s| - I` for the uniform superposition `|s⟩`.
pub fn diffusion(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |j, k| c(2.0 / d as f64 - if j == k { 1.0 } else { 0.0 }))
}

/// `|b⟩ ↦ |b + 1 mod d⟩`.
pub fn shift(d: usize) -> CMatrix {
    permutation_unitary(&(0..d).map(|b| (b + 1) % d).collect::<Vec<_>>())
        .expect("cyclic shift is a permutation")
}

/// `|b⟩ ↦ ω^b |b⟩`.
pub fn phase(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |j, k| {
        if j == k {
            Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64)
        } else {
            c(0.0)
        }
    })
}

/// The unitary sending basis state `j` to `perm[j]`.
pub fn permutation_unitary(perm: &[usize]) -> Result<CMatrix, QsimError> {
    let d = perm.len();
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(QsimError::NotPermutation);
        }
    }
    let mut m = CMatrix::zeros(d, d);
    for (j, &p) in perm.iter().enumerate() {
        m[(p, j)] = c(1.0);
    }
    Ok(m)
}

/// `A ⊗ B ⊗ C` acting on index, answer and workspace registers.
pub fn on_registers(index: &CMatrix, answer: &CMatrix, work: &CMatrix) -> CMatrix {
    index.kronecker(answer).kronecker(work)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phases so the distribution is exactly Haar.
    let phases = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let v = r[(i, i)];
            if v.norm() == 0.0 {
                c(1.0)
            } else {
                v / v.norm()
            }
        } else {
            c(0.0)
        }
    });
    q * phases
}

/// Max-abs deviation of `U†U` from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let d = u.nrows();
    let p = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((p[(i, j)] - c(target)).norm());
        }
    }
    dev
}

/// Gates available by name in the algorithm file format. Every gate acts on
/// the full `n·q·w` space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Identity,
    DftIndex,
    IdftIndex,
    DiffusionIndex,
    DftAnswer,
    IdftAnswer,
    ShiftAnswer,
    /// `|b⟩ ↦ ω^b |b⟩` on the answer register, `ω = e^{2πi/q}`.
    PhaseAnswer,
    /// Basis permutation of the full space.
    Permutation(Vec<usize>),
}

impl Gate {
    pub fn parse(tokens: &[&str]) -> Result<Self, String> {
        let (head, args) = tokens.split_first().ok_or("empty gate")?;
        let no_args = |g: Gate| if args.is_empty() { Ok(g) } else { Err(format!("{head} takes no arguments")) };
        match *head {
            "identity" => no_args(Self::Identity),
            "dft-index" => no_args(Self::DftIndex),
            "idft-index" => no_args(Self::IdftIndex),
            "diffusion-index" => no_args(Self::DiffusionIndex),
            "dft-answer" => no_args(Self::DftAnswer),
            "idft-answer" => no_args(Self::IdftAnswer),
            "shift-answer" => no_args(Self::ShiftAnswer),
            "phase-answer" => no_args(Self::PhaseAnswer),
            "permutation" => args
                .iter()
                .map(|a| a.parse::<usize>().map_err(|_| format!("bad permutation entry {a:?}")))
                .collect::<Result<Vec<_>, _>>()
                .map(Self::Permutation),
            other => Err(format!("unknown gate {other}")),
        }
    }

    pub fn matrix(&self, n: usize, q: usize, w: usize) -> Result<CMatrix, QsimError> {
        let (ii, ia, iw) = (CMatrix::identity(n, n), CMatrix::identity(q, q), CMatrix::identity(w, w));
        Ok(match self {
            Self::Identity => CMatrix::identity(n * q * w, n * q * w),
            Self::DftIndex => on_registers(&dft(n), &ia, &iw),
            Self::IdftIndex => on_registers(&idft(n), &ia, &iw),
            Self::DiffusionIndex => on_registers(&diffusion(n), &ia, &iw),
            Self::DftAnswer => on_registers(&ii, &dft(q), &iw),
            Self::IdftAnswer => on_registers(&ii, &idft(q), &iw),
            Self::ShiftAnswer => on_registers(&ii, &shift(q), &iw),
            Self::PhaseAnswer => on_registers(&ii, &phase(q), &iw),
            Self::Permutation(p) => {
                if p.len() != n * q * w {
                    return Err(QsimError::DimensionMismatch { expected: n * q * w, got: p.len() });
                }
                permutation_unitary(p)?
            }
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => write!(f, "identity"),
            Self::DftIndex => write!(f, "dft-index"),
            Self::IdftIndex => write!(f, "idft-index"),
            Self::DiffusionIndex => write!(f, "diffusion-index"),
            Self::DftAnswer => write!(f, "dft-answer"),
            Self::IdftAnswer => write!(f, "idft-answer"),
            Self::ShiftAnswer => write!(f, "shift-answer"),
            Self::PhaseAnswer => write!(f, "phase-answer"),
            Self::Permutation(p) => {
                write!(f, "permutation")?;
                p.iter().try_for_each(|v| write!(f, " {v}"))
            }
        }
    }
}
