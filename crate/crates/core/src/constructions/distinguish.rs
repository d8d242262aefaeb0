use std::collections::BTreeMap;

use super::{word, ConstructionError, FLOAT_GUARD};
use crate::boolfn::{Letter, PartialFunction};
use crate::qsim::{
    acceptance_probability, run, DensityState, Gate, Output, OutputSpec, QueryAlgorithm,
};

/// Minimum cross distance a distinguisher must reach.
pub const DEFAULT_THRESHOLD: f64 = 1.0 / 6.0;

/// Output states of a distinguisher, one per domain input.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguisherOutput {
    states: BTreeMap<Vec<Letter>, Output>,
    queries: usize,
}

impl DistinguisherOutput {
    pub fn new(states: BTreeMap<Vec<Letter>, Output>, queries: usize) -> Result<Self, ConstructionError> {
        let dims: Vec<usize> = states.values().map(output_dim).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(ConstructionError::BadParameter("output states differ in dimension".into()));
        }
        Ok(Self { states, queries })
    }

    pub fn get(&self, x: &[Letter]) -> Option<&Output> {
        self.states.get(x)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Letter>, &Output)> {
        self.states.iter()
    }
}

fn output_dim(o: &Output) -> usize {
    match o {
        Output::Pure(v) => v.len(),
        Output::Mixed(rho) => rho.dim(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguisherVerdict {
    /// Infinite when `f` is constant (there are no cross pairs).
    pub min_cross_distance: f64,
    pub worst_pair: Option<(Vec<Letter>, Vec<Letter>)>,
    pub threshold: f64,
    pub pass: bool,
}

/// Smallest trace distance between outputs on a 0-input and a 1-input.
pub fn verify_distinguisher(
    d: &DistinguisherOutput,
    f: &PartialFunction,
    threshold: f64,
) -> Result<DistinguisherVerdict, ConstructionError> {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (x, v) in f.entries() {
        let state = d.get(&x).ok_or_else(|| ConstructionError::IncompleteCoverage(word(&x, f.q())))?;
        if v { ones.push((x, state)) } else { zeros.push((x, state)) }
    }
    let mut min = f64::INFINITY;
    let mut worst = None;
    for (x, sx) in &zeros {
        for (y, sy) in &ones {
            let dist = sx.distance(sy)?;
            if dist < min {
                min = dist;
                worst = Some((x.clone(), y.clone()));
            }
        }
    }
    Ok(DistinguisherVerdict {
        min_cross_distance: min,
        worst_pair: worst,
        threshold,
        pass: min >= threshold - FLOAT_GUARD,
    })
}

/// Runs `alg` on every domain input of `f`.
pub fn distinguisher_outputs(
    alg: &QueryAlgorithm,
    f: &PartialFunction,
) -> Result<DistinguisherOutput, ConstructionError> {
    let states = f
        .domain()
        .map(|x| Ok((x.clone(), run(alg, &x)?)))
        .collect::<Result<BTreeMap<_, _>, ConstructionError>>()?;
    DistinguisherOutput::new(states, alg.queries())
}

/// The one-query algorithm preparing `n^{-1/2} Σ_i |i, x_i⟩` on `[n]^n`.
pub fn collision_distinguisher(n: usize) -> Result<QueryAlgorithm, ConstructionError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ConstructionError::BadArity(format!("n = {n} is not a power of two")));
    }
    Ok(QueryAlgorithm::from_gates(
        n,
        n,
        1,
        vec![vec![Gate::DftIndex], vec![Gate::Identity]],
        OutputSpec::Pure,
    )?)
}

/// Acceptance probability (answer register reads 1) on every domain input.
pub fn acceptance_probabilities(
    alg: &QueryAlgorithm,
    f: &PartialFunction,
) -> Result<Vec<(Vec<Letter>, bool, f64)>, ConstructionError> {
    f.entries()
        .map(|(x, v)| {
            let p = acceptance_probability(alg, &x)?;
            Ok((x, v, p))
        })
        .collect()
}

/// Checks `p_x >= 2/3` on 1-inputs and `p_x <= 1/3` on 0-inputs.
pub(super) fn bounded_error_probabilities(
    alg: &QueryAlgorithm,
    f: &PartialFunction,
) -> Result<Vec<(Vec<Letter>, bool, f64)>, ConstructionError> {
    let probs = acceptance_probabilities(alg, f)?;
    for (x, v, p) in &probs {
        let ok = if *v { *p >= 2.0 / 3.0 - FLOAT_GUARD } else { *p <= 1.0 / 3.0 + FLOAT_GUARD };
        if !ok {
            return Err(ConstructionError::NotBoundedError { input: word(x, f.q()), p: *p });
        }
    }
    Ok(probs)
}

/// Turns a bounded-error algorithm for `f` into the distinguisher whose
/// output is the dephased answer qubit `diag(1 - p_x, p_x)`.
pub fn q_to_qd(alg: &QueryAlgorithm, f: &PartialFunction) -> Result<DistinguisherOutput, ConstructionError> {
    let states = bounded_error_probabilities(alg, f)?
        .into_iter()
        .map(|(x, _, p)| (x, Output::Mixed(DensityState::from_probabilities(&[1.0 - p, p]))))
        .collect();
    DistinguisherOutput::new(states, alg.queries())
}
