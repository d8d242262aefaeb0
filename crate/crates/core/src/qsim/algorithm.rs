use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gates::{unitarity_deviation, CMatrix, Gate};
use super::state::{partial_trace, trace_distance, trace_distance_pure, DensityState};
use super::QsimError;
use crate::boolfn::Letter;

/// Largest simulated dimension `n·q·w` unless overridden.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Largest accepted `max |U†U - I|`.
pub const UNITARITY_TOL: f64 = 1e-10;

pub type StateVector = DVector<Complex64>;

/// What the algorithm outputs after `U_T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputSpec {
    /// The final pure state.
    Pure,
    /// The reduced state on the listed factors of `dims`.
    Keep { dims: Vec<usize>, keep: Vec<usize> },
    /// The answer register alone, completely dephased.
    DephaseAnswer,
}

/// The state an algorithm outputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Pure(StateVector),
    Mixed(DensityState),
}

impl Output {
    pub fn to_density(&self) -> DensityState {
        match self {
            Self::Pure(psi) => DensityState::from_pure(psi),
            Self::Mixed(rho) => rho.clone(),
        }
    }

    /// Trace distance, using the overlap formula when both states are pure.
    pub fn distance(&self, other: &Self) -> Result<f64, QsimError> {
        match (self, other) {
            (Self::Pure(a), Self::Pure(b)) => trace_distance_pure(a, b),
            _ => trace_distance(&self.to_density(), &other.to_density()),
        }
    }
}

/// One of the `T+1` oracle-independent unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub matrix: CMatrix,
    /// Gate list the matrix was built from, applied first to last.
    pub gates: Option<Vec<Gate>>,
}

/// A `T`-query algorithm `U_T O_x ⋯ U_1 O_x U_0 |0⟩` on
/// `index (n) ⊗ answer (q) ⊗ workspace (w)`. Basis state `|i, b, s⟩` has
/// index `i·q·w + b·w + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryAlgorithm {
    n: usize,
    q: usize,
    w: usize,
    steps: Vec<Step>,
    output: OutputSpec,
}

impl QueryAlgorithm {
    pub fn new(
        n: usize,
        q: usize,
        w: usize,
        unitaries: Vec<CMatrix>,
        output: OutputSpec,
    ) -> Result<Self, QsimError> {
        let steps = unitaries.into_iter().map(|matrix| Step { matrix, gates: None }).collect();
        Self::from_steps(n, q, w, steps, output, DEFAULT_DIM_CAP)
    }

    /// Builds each unitary as the product of its gates, first gate applied first.
    pub fn from_gates(
        n: usize,
        q: usize,
        w: usize,
        gates: Vec<Vec<Gate>>,
        output: OutputSpec,
    ) -> Result<Self, QsimError> {
        check_layout(n, q, w, DEFAULT_DIM_CAP)?;
        let steps = gates
            .into_iter()
            .map(|list| {
                let d = n * q * w;
                let mut m = CMatrix::identity(d, d);
                for g in &list {
                    m = g.matrix(n, q, w)? * m;
                }
                Ok(Step { matrix: m, gates: Some(list) })
            })
            .collect::<Result<Vec<_>, QsimError>>()?;
        Self::from_steps(n, q, w, steps, output, DEFAULT_DIM_CAP)
    }

    pub fn from_steps(
        n: usize,
        q: usize,
        w: usize,
        steps: Vec<Step>,
        output: OutputSpec,
        cap: usize,
    ) -> Result<Self, QsimError> {
        check_layout(n, q, w, cap)?;
        let d = n * q * w;
        if steps.is_empty() {
            return Err(QsimError::BadAlgorithm("needs at least U_0".into()));
        }
        for (t, s) in steps.iter().enumerate() {
            if s.matrix.nrows() != d || s.matrix.ncols() != d {
                return Err(QsimError::DimensionMismatch { expected: d, got: s.matrix.nrows() });
            }
            let dev = unitarity_deviation(&s.matrix);
            if !(dev <= UNITARITY_TOL) {
                return Err(QsimError::NotUnitary { step: t, deviation: dev });
            }
        }
        if let OutputSpec::Keep { dims, keep } = &output {
            if dims.iter().try_fold(1usize, |a, &x| a.checked_mul(x)) != Some(d)
                || keep.iter().any(|&k| k >= dims.len())
                || keep.is_empty()
            {
                return Err(QsimError::BadFactorization(format!("{dims:?} keep {keep:?}")));
            }
        }
        Ok(Self { n, q, w, steps, output })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn dim(&self) -> usize {
        self.n * self.q * self.w
    }

    /// Number of queries `T`.
    pub fn queries(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn output_spec(&self) -> &OutputSpec {
        &self.output
    }

    pub fn with_output(mut self, output: OutputSpec) -> Result<Self, QsimError> {
        let cap = self.dim().max(DEFAULT_DIM_CAP);
        self.output = output;
        Self::from_steps(self.n, self.q, self.w, self.steps, self.output, cap)
    }

    fn check_input(&self, x: &[Letter]) -> Result<(), QsimError> {
        if x.len() != self.n {
            return Err(QsimError::DimensionMismatch { expected: self.n, got: x.len() });
        }
        if let Some(&l) = x.iter().find(|&&l| l as usize >= self.q) {
            return Err(QsimError::BadInput(format!("letter {l} with q = {}", self.q)));
        }
        Ok(())
    }

    fn finish(&self, psi: &StateVector) -> Result<Output, QsimError> {
        Ok(match &self.output {
            OutputSpec::Pure => Output::Pure(psi.clone()),
            OutputSpec::Keep { dims, keep } => {
                Output::Mixed(partial_trace(&DensityState::from_pure(psi), dims, keep)?)
            }
            OutputSpec::DephaseAnswer => Output::Mixed(DensityState::from_probabilities(
                &answer_distribution(psi, self.n, self.q, self.w),
            )),
        })
    }
}

fn check_layout(n: usize, q: usize, w: usize, cap: usize) -> Result<(), QsimError> {
    if n == 0 || q < 2 || w == 0 {
        return Err(QsimError::BadAlgorithm(format!("bad layout n={n} q={q} w={w}")));
    }
    let d = n.checked_mul(q).and_then(|v| v.checked_mul(w)).unwrap_or(usize::MAX);
    if d > cap {
        return Err(QsimError::DimensionCap { dim: d, cap });
    }
    Ok(())
}

/// `O_x |i, b, s⟩ = |i, b + x_i mod q, s⟩`.
pub fn apply_oracle(
    state: &StateVector,
    n: usize,
    q: usize,
    w: usize,
    x: &[Letter],
) -> Result<StateVector, QsimError> {
    if state.len() != n * q * w {
        return Err(QsimError::DimensionMismatch { expected: n * q * w, got: state.len() });
    }
    if x.len() != n {
        return Err(QsimError::DimensionMismatch { expected: n, got: x.len() });
    }
    let mut out = StateVector::zeros(state.len());
    for i in 0..n {
        let xi = x[i] as usize % q;
        for b in 0..q {
            let nb = (b + xi) % q;
            for s in 0..w {
                out[i * q * w + nb * w + s] = state[i * q * w + b * w + s];
            }
        }
    }
    Ok(out)
}

/// Probability of each index value.
pub fn index_masses(state: &StateVector, n: usize, q: usize, w: usize) -> Vec<f64> {
    (0..n)
        .map(|i| state.rows(i * q * w, q * w).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// Probability of each answer value.
pub fn answer_distribution(state: &StateVector, n: usize, q: usize, w: usize) -> Vec<f64> {
    let mut p = vec![0.0; q];
    for i in 0..n {
        for (b, pb) in p.iter_mut().enumerate() {
            for s in 0..w {
                *pb += state[i * q * w + b * w + s].norm_sqr();
            }
        }
    }
    p
}

/// States and query masses of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// `|ψ^t⟩` for `t = 0..=T`, with `|ψ^0⟩ = U_0|0⟩` and `|ψ^t⟩ = U_t O_x |ψ^{t-1}⟩`.
    pub states: Vec<StateVector>,
    /// `mass[t-1][i]`: probability of index `i` right before query `t`.
    pub mass: Vec<Vec<f64>>,
    pub output: Output,
}

impl RunTrace {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("at least U_0")
    }
}

pub fn run_traced(alg: &QueryAlgorithm, x: &[Letter]) -> Result<RunTrace, QsimError> {
    alg.check_input(x)?;
    let (n, q, w) = (alg.n, alg.q, alg.w);
    let mut psi = StateVector::zeros(alg.dim());
    psi[0] = Complex64::new(1.0, 0.0);
    psi = &alg.steps[0].matrix * psi;
    let mut states = vec![psi.clone()];
    let mut mass = Vec::with_capacity(alg.queries());
    for step in &alg.steps[1..] {
        mass.push(index_masses(&psi, n, q, w));
        psi = &step.matrix * apply_oracle(&psi, n, q, w, x)?;
        states.push(psi.clone());
    }
    let output = alg.finish(&psi)?;
    Ok(RunTrace { states, mass, output })
}

pub fn run(alg: &QueryAlgorithm, x: &[Letter]) -> Result<Output, QsimError> {
    Ok(run_traced(alg, x)?.output)
}

/// Probability that the answer register reads 1 at the end.
pub fn acceptance_probability(alg: &QueryAlgorithm, x: &[Letter]) -> Result<f64, QsimError> {
    let trace = run_traced(alg, x)?;
    Ok(answer_distribution(trace.final_state(), alg.n, alg.q, alg.w)[1])
}

/// Runs `t` queries' worth of the algorithm on `x`, measures the index
/// register before query `t` and returns the position with the letter there.
pub fn sample_query_position(
    alg: &QueryAlgorithm,
    x: &[Letter],
    t: usize,
    seed: u64,
) -> Result<(usize, Letter), QsimError> {
    let masses = run_traced(alg, x)?.mass;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_from_masses(&masses, x, t, &mut rng)
}

/// As `sample_query_position`, reusing precomputed masses and a caller RNG.
pub fn sample_from_masses(
    mass: &[Vec<f64>],
    x: &[Letter],
    t: usize,
    rng: &mut impl Rng,
) -> Result<(usize, Letter), QsimError> {
    if t == 0 || t > mass.len() {
        return Err(QsimError::NoQuery { t, queries: mass.len() });
    }
    let row = &mass[t - 1];
    let total: f64 = row.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &m) in row.iter().enumerate() {
        if u < m {
            return Ok((i, x[i]));
        }
        u -= m;
    }
    // Rounding left u just above the last positive mass.
    let i = row.iter().rposition(|&m| m > 0.0).unwrap_or(0);
    Ok((i, x[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(d: usize, k: usize) -> StateVector {
        let mut v = StateVector::zeros(d);
        v[k] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn oracle_examples() {
        // n=2, q=2: |i=1, b=0⟩ on x = 10 (x_1 = 0 at 0-based position 1).
        let out = apply_oracle(&basis(4, 2), 2, 2, 1, &[1, 0]).unwrap();
        assert_eq!(out, basis(4, 2));
        let out = apply_oracle(&basis(4, 0), 2, 2, 1, &[1, 0]).unwrap();
        assert_eq!(out, basis(4, 1));
        // q=4: |i=1, b=3⟩ with x_1 = 2 goes to b=1.
        let out = apply_oracle(&basis(8, 4 + 3), 2, 4, 1, &[0, 2]).unwrap();
        assert_eq!(out, basis(8, 4 + 1));
        // Binary oracle is an involution.
        let v = StateVector::from_fn(8, |k, _| Complex64::new(k as f64, 1.0));
        let twice = apply_oracle(&apply_oracle(&v, 4, 2, 1, &[1, 0, 1, 1]).unwrap(), 4, 2, 1, &[1, 0, 1, 1]).unwrap();
        assert_eq!(twice, v);
        assert!(apply_oracle(&v, 3, 2, 1, &[0, 0, 0]).is_err());
    }

    #[test]
    fn zero_query_identity() {
        let alg = QueryAlgorithm::new(2, 2, 1, vec![CMatrix::identity(4, 4)], OutputSpec::Pure).unwrap();
        let trace = run_traced(&alg, &[0, 1]).unwrap();
        assert!(trace.mass.is_empty());
        assert_eq!(trace.output, Output::Pure(basis(4, 0)));
        assert!(matches!(sample_query_position(&alg, &[0, 1], 1, 0), Err(QsimError::NoQuery { .. })));
    }

    #[test]
    fn rejects_bad_algorithms() {
        let bad = CMatrix::identity(4, 4) * Complex64::new(2.0, 0.0);
        assert!(matches!(
            QueryAlgorithm::new(2, 2, 1, vec![bad], OutputSpec::Pure),
            Err(QsimError::NotUnitary { step: 0, .. })
        ));
        assert!(matches!(
            QueryAlgorithm::new(2, 2, 1, vec![CMatrix::identity(3, 3)], OutputSpec::Pure),
            Err(QsimError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            QueryAlgorithm::new(64, 8, 16, vec![], OutputSpec::Pure),
            Err(QsimError::DimensionCap { .. })
        ));
    }

    #[test]
    fn point_mass_sampling() {
        // U_0 swaps |0,0⟩ and |3,0⟩, so the index is 3 with certainty.
        let mut perm: Vec<usize> = (0..8).collect();
        perm.swap(0, 6);
        let u0 = super::super::gates::permutation_unitary(&perm).unwrap();
        let alg = QueryAlgorithm::new(4, 2, 1, vec![u0, CMatrix::identity(8, 8)], OutputSpec::Pure).unwrap();
        for seed in 0..20 {
            assert_eq!(sample_query_position(&alg, &[0, 1, 0, 1], 1, seed).unwrap(), (3, 1));
        }
    }
}
