use std::collections::BTreeMap;

use num_complex::Complex64;

use super::distinguish::bounded_error_probabilities;
use super::{word, ConstructionError, DistinguisherOutput, FLOAT_GUARD};
use crate::boolfn::{Letter, PartialFunction};
use crate::numopt::{eig_hermitian, HermitianMatrix};
use crate::qsim::{
    partial_trace, run_traced, trace_distance, CMatrix, DensityState, Output, QueryAlgorithm,
    StateVector,
};

/// States `(ρ_x, σ_x)` for every domain input, with the total query count
/// of the two preparing algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct QszkPair {
    pairs: BTreeMap<Vec<Letter>, (DensityState, DensityState)>,
    queries: usize,
}

impl QszkPair {
    pub fn new(
        pairs: BTreeMap<Vec<Letter>, (DensityState, DensityState)>,
        queries: usize,
    ) -> Result<Self, ConstructionError> {
        if pairs.values().any(|(r, s)| r.dim() != s.dim()) {
            return Err(ConstructionError::BadParameter("ρ_x and σ_x differ in dimension".into()));
        }
        Ok(Self { pairs, queries })
    }

    pub fn get(&self, x: &[Letter]) -> Option<&(DensityState, DensityState)> {
        self.pairs.get(x)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Letter>, &(DensityState, DensityState))> {
        self.pairs.iter()
    }

    /// `‖ρ_x - σ_x‖_tr` per input.
    pub fn distances(&self) -> Result<Vec<(Vec<Letter>, f64)>, ConstructionError> {
        self.pairs
            .iter()
            .map(|(x, (r, s))| Ok((x.clone(), trace_distance(r, s)?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QszkCheck {
    /// Smallest pair distance over 1-inputs (infinite if there are none).
    pub far_min: f64,
    /// Largest pair distance over 0-inputs (zero if there are none).
    pub close_max: f64,
    /// First input breaking a clause, with its value and distance.
    pub violation: Option<(Vec<Letter>, bool, f64)>,
}

impl QszkCheck {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Distance at least 2/3 on 1-inputs and at most 1/3 on 0-inputs.
pub fn check_qszk(pair: &QszkPair, f: &PartialFunction) -> Result<QszkCheck, ConstructionError> {
    let mut check = QszkCheck { far_min: f64::INFINITY, close_max: 0.0, violation: None };
    for (x, v) in f.entries() {
        let (r, s) = pair.get(&x).ok_or_else(|| ConstructionError::IncompleteCoverage(word(&x, f.q())))?;
        let d = trace_distance(r, s)?;
        let ok = if v {
            check.far_min = check.far_min.min(d);
            d >= 2.0 / 3.0 - FLOAT_GUARD
        } else {
            check.close_max = check.close_max.max(d);
            d <= 1.0 / 3.0 + FLOAT_GUARD
        };
        if !ok && check.violation.is_none() {
            check.violation = Some((x, v, d));
        }
    }
    Ok(check)
}

/// `ρ_x = diag(1 - p_x, p_x)` against the fixed `σ_x = |0⟩⟨0|`.
pub fn q_to_qszk(alg: &QueryAlgorithm, f: &PartialFunction) -> Result<QszkPair, ConstructionError> {
    let sigma = DensityState::from_probabilities(&[1.0, 0.0]);
    let pairs = bounded_error_probabilities(alg, f)?
        .into_iter()
        .map(|(x, _, p)| (x, (DensityState::from_probabilities(&[1.0 - p, p]), sigma.clone())))
        .collect();
    QszkPair::new(pairs, alg.queries())
}

/// The distinguisher with outputs `ρ_x ⊗ σ_x`.
pub fn qszk_to_qd(pair: &QszkPair, f: &PartialFunction) -> Result<DistinguisherOutput, ConstructionError> {
    if let Some((x, value, distance)) = check_qszk(pair, f)?.violation {
        return Err(ConstructionError::QszkPromiseViolated { input: word(&x, f.q()), value, distance });
    }
    let states = f
        .domain()
        .map(|x| {
            let (r, s) = pair.get(&x).expect("coverage checked");
            (x, Output::Mixed(r.tensor(s)))
        })
        .collect();
    DistinguisherOutput::new(states, pair.queries())
}

/// Two algorithms whose final pure states purify `ρ_x` and `σ_x`. Their
/// common dimension factors as `B ⊗ C` with `B` of size `b_dim`; the mixed
/// states live on `C`.
#[derive(Debug, Clone)]
pub struct ComplementInput {
    pub r: QueryAlgorithm,
    pub s: QueryAlgorithm,
    pub b_dim: usize,
}

/// The unitary that explains the output on one input.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplementWitness {
    /// `ρ_x = σ_x`: `U_B` with `(U_B ⊗ 1)|R_x⟩ = |S_x⟩`, from the polar
    /// decomposition of the overlap operator, and the register-A states left
    /// after applying it on the `A = 0` branch.
    Swap { unitary: CMatrix, residual: f64, a_states: (DensityState, DensityState) },
    /// `ρ_x ⊥ σ_x`: the unitary on `C ⊗ D` writing "is it σ" into `D`,
    /// which maps `|R'_x⟩` to `|S'_x⟩`.
    Writer { unitary: CMatrix, residual: f64 },
}

impl ComplementWitness {
    pub fn residual(&self) -> f64 {
        match self {
            Self::Swap { residual, .. } | Self::Writer { residual, .. } => *residual,
        }
    }
}

/// `|R'⟩ = (|0⟩|R⟩|0⟩ + |1⟩|S⟩|0⟩)/√2` and `|S'⟩ = (|0⟩|R⟩|0⟩ + |1⟩|S⟩|1⟩)/√2`
/// on `A ⊗ (BC) ⊗ D`.
pub fn complement_purifications(r: &StateVector, s: &StateVector) -> (StateVector, StateVector) {
    let m = r.len();
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut rp = StateVector::zeros(4 * m);
    let mut sp = StateVector::zeros(4 * m);
    for k in 0..m {
        rp[2 * k] = r[k] * h;
        sp[2 * k] = r[k] * h;
        rp[2 * m + 2 * k] = s[k] * h;
        sp[2 * m + 2 * k + 1] = s[k] * h;
    }
    (rp, sp)
}

/// Reshapes `|ψ⟩ ∈ B ⊗ C` into the `b × c` coefficient matrix.
fn coefficients(psi: &StateVector, b: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(b, c, |i, j| psi[i * c + j])
}

fn swap_witness(r: &StateVector, s: &StateVector, b: usize, c: usize) -> Result<ComplementWitness, ConstructionError> {
    let (mr, ms) = (coefficients(r, b, c), coefficients(s, b, c));
    let svd = (&ms * mr.adjoint()).svd(true, true);
    let unitary = svd.u.expect("requested") * svd.v_t.expect("requested");
    let residual = (&unitary * &mr - &ms).norm();
    // Apply U_B on the A = 0 branch, then keep A alone.
    let um = &unitary * &mr;
    let moved = StateVector::from_fn(b * c, |k, _| um[(k / c, k % c)]);
    let (rp, sp) = complement_purifications(&moved, s);
    let dims = [2, b * c, 2];
    let a_r = partial_trace(&DensityState::from_pure(&rp), &dims, &[0])?;
    let a_s = partial_trace(&DensityState::from_pure(&sp), &dims, &[0])?;
    Ok(ComplementWitness::Swap { unitary, residual, a_states: (a_r, a_s) })
}

fn writer_witness(sigma: &DensityState, r: &StateVector, s: &StateVector, b: usize, c: usize) -> ComplementWitness {
    let h = HermitianMatrix::with_tolerance(sigma.matrix().clone(), 1e-9).expect("density matrices are Hermitian");
    let eig = eig_hermitian(&h);
    let mut proj = CMatrix::zeros(c, c);
    for k in 0..c {
        if eig.values[k] > 1e-9 {
            let v = eig.vectors.column(k);
            proj += &v * v.adjoint();
        }
    }
    let id_c = CMatrix::identity(c, c);
    let id_d = CMatrix::identity(2, 2);
    let not = CMatrix::from_fn(2, 2, |i, j| Complex64::new(if i != j { 1.0 } else { 0.0 }, 0.0));
    let unitary = (&id_c - &proj).kronecker(&id_d) + proj.kronecker(&not);
    let full = CMatrix::identity(2 * b, 2 * b).kronecker(&unitary);
    let (rp, sp) = complement_purifications(r, s);
    let residual = (full * rp - sp).norm();
    ComplementWitness::Writer { unitary, residual }
}

/// Builds `ρ'_x = Tr_CD |R'_x⟩⟨R'_x|` and `σ'_x = Tr_CD |S'_x⟩⟨S'_x|` on
/// `A ⊗ B` for every domain input. Only the ideal case is supported: each
/// input must have `ρ_x = σ_x` or `ρ_x ⊥ σ_x` (within 1e-9).
pub fn qszk_complement(
    input: &ComplementInput,
    f: &PartialFunction,
) -> Result<(QszkPair, Vec<(Vec<Letter>, ComplementWitness)>), ConstructionError> {
    let d = input.r.dim();
    if input.s.dim() != d {
        return Err(ConstructionError::RegisterSpecInvalid(format!(
            "circuits have dimensions {d} and {}",
            input.s.dim()
        )));
    }
    let b = input.b_dim;
    if b == 0 || d % b != 0 {
        return Err(ConstructionError::RegisterSpecInvalid(format!("B of size {b} does not divide {d}")));
    }
    let c = d / b;
    let mut pairs = BTreeMap::new();
    let mut witnesses = Vec::new();
    for x in f.domain() {
        let r = run_traced(&input.r, &x)?.final_state().clone();
        let s = run_traced(&input.s, &x)?.final_state().clone();
        let rho = partial_trace(&DensityState::from_pure(&r), &[b, c], &[1])?;
        let sigma = partial_trace(&DensityState::from_pure(&s), &[b, c], &[1])?;
        let dist = trace_distance(&rho, &sigma)?;
        let witness = if dist <= 1e-9 {
            swap_witness(&r, &s, b, c)?
        } else if dist >= 1.0 - 1e-9 {
            writer_witness(&sigma, &r, &s, b, c)
        } else {
            return Err(ConstructionError::NotIdeal { input: word(&x, f.q()), distance: dist });
        };
        let (rp, sp) = complement_purifications(&r, &s);
        let dims = [2, b, c, 2];
        let rho_p = partial_trace(&DensityState::from_pure(&rp), &dims, &[0, 1])?;
        let sigma_p = partial_trace(&DensityState::from_pure(&sp), &dims, &[0, 1])?;
        pairs.insert(x.clone(), (rho_p, sigma_p));
        witnesses.push((x, witness));
    }
    Ok((QszkPair::new(pairs, input.r.queries() + input.s.queries())?, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purifications_differ_only_in_d() {
        let r = StateVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let s = StateVector::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]);
        let (rp, sp) = complement_purifications(&r, &s);
        assert!((rp.norm() - 1.0).abs() < 1e-12 && (sp.norm() - 1.0).abs() < 1e-12);
        // Swapping D on the A = 1 branch of |S'⟩ gives |R'⟩.
        let mut swapped = sp.clone();
        for k in 0..2 {
            swapped.swap_rows(4 + 2 * k, 4 + 2 * k + 1);
        }
        assert_eq!(swapped, rp);
    }
}
