//! The adversary bound as a semidefinite program.
//!
//! The solver works on the minimization form
//!
//! ```text
//! min t  s.t.  Σ_i X_i[x,x] <= t            for every input x
//!              Σ_{i: x_i != y_i} X_i[x,y] = 1  (or >= 1 with nonnegative weights)
//!              X_i ⪰ 0
//! ```
//!
//! whose dual is the spectral program `max ‖Γ‖ s.t. ‖Γ∘D_i‖ <= 1`. Both sides
//! of the reported interval are certified independently of solver accuracy:
//! the upper end by repairing the primal iterate into an exactly feasible
//! point, the lower end by rescaling the dual iterate into an explicit Γ.

use nalgebra::DMatrix;
use thiserror::Error;

use super::hermitian::spectral_norm_real;
use super::sdp::{solve_block_sdp, BlockSdp, Entry, SdpOptions};
use crate::boolfn::{BoolFnError, Letter, PartialFunction};
use crate::measures::{MeasureReport, Provenance};

/// Largest `|X|·|Y|` the solver accepts.
pub const MAX_PAIRS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignMode {
    Nonnegative,
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversaryError {
    #[error("certified gap {gap:.3e} exceeds tolerance {tol:.1e} (bounds [{lower}, {upper}])")]
    ConvergenceFailure { lower: f64, upper: f64, gap: f64, tol: f64 },
    #[error("instance has {0} cross pairs, above the cap of {MAX_PAIRS}")]
    TooLarge(usize),
    #[error("a 0-input and a 1-input are identical")]
    IllDefined,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(transparent)]
    Function(#[from] BoolFnError),
}

/// 0-inputs `X`, 1-inputs `Y` and the disagreement masks `D_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpAdversaryInstance {
    pub zeros: Vec<Vec<Letter>>,
    pub ones: Vec<Vec<Letter>>,
    /// `masks[i][a][b]` is true iff `zeros[a]` and `ones[b]` differ at position `i`.
    pub masks: Vec<Vec<Vec<bool>>>,
    pub mode: SignMode,
}

impl SdpAdversaryInstance {
    pub fn new(
        zeros: Vec<Vec<Letter>>,
        ones: Vec<Vec<Letter>>,
        mode: SignMode,
    ) -> Result<Self, AdversaryError> {
        let n = zeros.first().or(ones.first()).map_or(0, |x| x.len());
        let masks: Vec<Vec<Vec<bool>>> = (0..n)
            .map(|i| {
                zeros
                    .iter()
                    .map(|x| ones.iter().map(|y| x[i] != y[i]).collect())
                    .collect()
            })
            .collect();
        for a in 0..zeros.len() {
            for b in 0..ones.len() {
                if !(0..n).any(|i| masks[i][a][b]) {
                    return Err(AdversaryError::IllDefined);
                }
            }
        }
        Ok(Self { zeros, ones, masks, mode })
    }

    /// `X = f⁻¹(0)`, `Y = f⁻¹(1)`.
    pub fn from_function(f: &PartialFunction, mode: SignMode) -> Result<Self, AdversaryError> {
        if !f.is_binary() {
            return Err(BoolFnError::AlphabetUnsupported(f.q()).into());
        }
        Self::new(f.inputs_with_value(false).collect(), f.inputs_with_value(true).collect(), mode)
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }
}

/// Computes the adversary value of the instance to within `tol`.
pub fn adversary_sdp(inst: &SdpAdversaryInstance, tol: f64) -> Result<MeasureReport, AdversaryError> {
    let (name, provenance) = match inst.mode {
        SignMode::Nonnegative => ("Adv", Provenance::SdpCertified),
        SignMode::Unrestricted => ("Adv±", Provenance::SdpCertified),
    };
    if !(tol > 0.0) {
        return Err(AdversaryError::BadTolerance);
    }
    let (nx, ny, n) = (inst.zeros.len(), inst.ones.len(), inst.n());
    if nx * ny == 0 {
        return Ok(MeasureReport::bracketed(name, 0.0, 0.0, tol, provenance));
    }
    if nx * ny > MAX_PAIRS {
        return Err(AdversaryError::TooLarge(nx * ny));
    }
    let big_n = nx + ny;
    // Index of 1-input b among all inputs is nx + b.
    let pairs: Vec<(usize, usize, Vec<usize>)> = (0..nx)
        .flat_map(|a| (0..ny).map(move |b| (a, b)))
        .map(|(a, b)| (a, nx + b, (0..n).filter(|&i| inst.masks[i][a][b]).collect()))
        .collect();
    let nonneg = inst.mode == SignMode::Nonnegative;

    // LP block: t, s_x (big_n), u_xy (pairs, nonnegative mode only).
    let lp_dim = 1 + big_n + if nonneg { pairs.len() } else { 0 };
    let mut c_lp = vec![0.0; lp_dim];
    c_lp[0] = 1.0;
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for x in 0..big_n {
        let mut row = vec![Entry::Lp { j: 0, value: 1.0 }, Entry::Lp { j: 1 + x, value: -1.0 }];
        row.extend((0..n).map(|i| Entry::Psd { block: i, r: x, c: x, value: -1.0 }));
        rows.push(row);
        b.push(0.0);
    }
    for (k, (x, y, diff)) in pairs.iter().enumerate() {
        let mut row: Vec<Entry> =
            diff.iter().map(|&i| Entry::Psd { block: i, r: *x, c: *y, value: 0.5 }).collect();
        if nonneg {
            row.push(Entry::Lp { j: 1 + big_n + k, value: -1.0 });
        }
        rows.push(row);
        b.push(1.0);
    }
    let problem = BlockSdp { psd_dims: vec![big_n; n], lp_dim, c_lp, rows, b };
    let result = solve_block_sdp(&problem, SdpOptions::default());
    let pt = &result.point;

    // Upper bound: make the primal iterate exactly feasible.
    let mut xs = pt.x_psd.clone();
    for (x, y, diff) in &pairs {
        let have: f64 = diff.iter().map(|&i| xs[i][(*x, *y)]).sum();
        let r = 1.0 - have;
        if r == 0.0 || (nonneg && r < 0.0) {
            continue;
        }
        let i = diff[0];
        let sign = r.signum();
        xs[i][(*x, *x)] += r.abs();
        xs[i][(*y, *y)] += r.abs();
        xs[i][(*x, *y)] += r;
        xs[i][(*y, *x)] += r;
        debug_assert!(sign != 0.0);
    }
    for m in xs.iter_mut() {
        *m = (&*m + m.transpose()) * 0.5;
        let lmin = m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if lmin < 0.0 {
            let shift = -lmin * (1.0 + 1e-9) + 1e-15 * m.amax();
            for k in 0..big_n {
                m[(k, k)] += shift;
            }
        }
    }
    let upper = (0..big_n).map(|x| xs.iter().map(|m| m[(x, x)]).sum::<f64>()).fold(0.0, f64::max);

    // Lower bound: Γ = W^{-1/2} G W^{-1/2} from the dual multipliers.
    let y = &pt.y;
    let wmax = (0..big_n).map(|x| y[x]).fold(0.0, f64::max);
    let w: Vec<f64> =
        (0..big_n).map(|x| if y[x] > 1e-12 * wmax { y[x] } else { 0.0 }).collect();
    let mut gamma = DMatrix::<f64>::zeros(big_n, big_n);
    for (k, (x, yy, _)) in pairs.iter().enumerate() {
        let mut g = y[big_n + k];
        if nonneg && g < 0.0 {
            g = 0.0;
        }
        if w[*x] > 0.0 && w[*yy] > 0.0 {
            let v = g / (w[*x] * w[*yy]).sqrt();
            gamma[(*x, *yy)] = v;
            gamma[(*yy, *x)] = v;
        }
    }
    let lower = certified_ratio(&gamma, &pairs, n);

    let gap = upper - lower;
    if !(gap <= tol) {
        return Err(AdversaryError::ConvergenceFailure { lower, upper, gap, tol });
    }
    Ok(MeasureReport::bracketed(name, lower, upper.max(lower), tol, provenance))
}

/// `‖Γ‖ / max_i ‖Γ∘D_i‖`, the value of the feasible witness obtained by scaling Γ.
fn certified_ratio(gamma: &DMatrix<f64>, pairs: &[(usize, usize, Vec<usize>)], n: usize) -> f64 {
    let norm = spectral_norm_real(gamma);
    if norm == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut masked = DMatrix::<f64>::zeros(gamma.nrows(), gamma.ncols());
        for (x, y, diff) in pairs {
            if diff.contains(&i) {
                masked[(*x, *y)] = gamma[(*x, *y)];
                masked[(*y, *x)] = gamma[(*y, *x)];
            }
        }
        worst = worst.max(spectral_norm_real(&masked));
    }
    if worst == 0.0 {
        0.0
    } else {
        norm / worst
    }
}

/// Value of an explicit witness Γ given on `zeros × ones`, after scaling it
/// to satisfy every `‖Γ∘D_i‖ <= 1`.
pub fn witness_value(inst: &SdpAdversaryInstance, gamma: &DMatrix<f64>) -> f64 {
    let (nx, ny) = (inst.zeros.len(), inst.ones.len());
    assert_eq!((gamma.nrows(), gamma.ncols()), (nx, ny), "witness shape");
    let mut full = DMatrix::<f64>::zeros(nx + ny, nx + ny);
    let mut pairs = Vec::new();
    for a in 0..nx {
        for b in 0..ny {
            full[(a, nx + b)] = gamma[(a, b)];
            full[(nx + b, a)] = gamma[(a, b)];
            let diff = (0..inst.n()).filter(|&i| inst.masks[i][a][b]).collect();
            pairs.push((a, nx + b, diff));
        }
    }
    certified_ratio(&full, &pairs, inst.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adv(f: &PartialFunction, mode: SignMode) -> MeasureReport {
        adversary_sdp(&SdpAdversaryInstance::from_function(f, mode).unwrap(), 1e-4).unwrap()
    }

    #[test]
    fn or2_is_sqrt2() {
        let r = adv(&PartialFunction::or(2), SignMode::Nonnegative);
        assert!((r.value - 2f64.sqrt()).abs() < 1e-4, "{r}");
        assert!(r.lower <= r.upper && r.upper - r.lower <= 1e-4);
    }

    #[test]
    fn parity2_is_2() {
        let r = adv(&PartialFunction::parity(2), SignMode::Nonnegative);
        assert!((r.value - 2.0).abs() < 1e-4, "{r}");
    }

    #[test]
    fn single_pair_is_1() {
        let inst =
            SdpAdversaryInstance::new(vec![vec![0, 0]], vec![vec![1, 0]], SignMode::Nonnegative)
                .unwrap();
        let r = adversary_sdp(&inst, 1e-4).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4, "{r}");
    }

    #[test]
    fn constant_is_zero() {
        let r = adv(&PartialFunction::constant(2, true), SignMode::Unrestricted);
        assert_eq!((r.lower, r.upper), (0.0, 0.0));
    }

    #[test]
    fn ill_defined_instance() {
        assert_eq!(
            SdpAdversaryInstance::new(vec![vec![1]], vec![vec![1]], SignMode::Nonnegative),
            Err(AdversaryError::IllDefined)
        );
    }

    #[test]
    fn closed_form_or_witness() {
        // Equal weight on (0…0, e_i) pairs gives √n.
        for n in 2..=4 {
            let f = PartialFunction::or(n);
            let inst = SdpAdversaryInstance::from_function(&f, SignMode::Nonnegative).unwrap();
            let gamma = DMatrix::from_fn(1, inst.ones.len(), |_, b| {
                (inst.ones[b].iter().filter(|&&l| l == 1).count() == 1) as u8 as f64
            });
            assert!((witness_value(&inst, &gamma) - (n as f64).sqrt()).abs() < 1e-12);
        }
    }
}
