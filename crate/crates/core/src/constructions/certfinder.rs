use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{word, ConstructionError};
use crate::boolfn::{BoolFnError, Letter, PartialAssignment, PartialFunction};
use crate::numopt::Rational;
use crate::qsim::{run_traced, sample_from_masses, QueryAlgorithm};

/// Leading constant of the repetition count.
pub const REPETITION_CONSTANT: u64 = 64;

/// `64 · T² · s · ⌈log₂(fbs + 2)⌉`.
pub fn repetitions(queries: usize, sensitivity: u64, fbs: &Rational) -> u64 {
    let target = fbs + Rational::from_integer(2.into());
    let mut log = 0u64;
    let mut power = Rational::one();
    while power < target {
        power *= Rational::from_integer(2.into());
        log += 1;
    }
    REPETITION_CONSTANT * (queries as u64).pow(2) * sensitivity * log
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateRun {
    pub assignment: PartialAssignment,
    pub is_cert: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroErrorRun {
    pub value: bool,
    pub certificate: PartialAssignment,
    /// Batches of repetitions run; 0 when the empty assignment already certifies.
    pub batches_used: usize,
}

fn check_input(f: &PartialFunction, x: &[Letter]) -> Result<(), ConstructionError> {
    if f.contains(x) {
        Ok(())
    } else {
        Err(BoolFnError::OutOfDomain(word(x, f.q())).into())
    }
}

/// `reps` independent runs: pick `t` uniformly from `1..=T`, measure the
/// query register before query `t`, and write down the position and letter.
fn batch(
    mass: &[Vec<f64>],
    x: &[Letter],
    reps: u64,
    rng: &mut ChaCha8Rng,
) -> Result<PartialAssignment, ConstructionError> {
    let mut a = PartialAssignment::empty(x.len());
    for _ in 0..reps {
        let t = if mass.is_empty() { 0 } else { rng.gen_range(1..=mass.len()) };
        let (i, letter) = sample_from_masses(mass, x, t, rng)?;
        a.set(i, letter)?;
    }
    Ok(a)
}

/// One execution of `reps` repetitions of the sampling procedure on `x`.
pub fn certificate_finder_p(
    alg: &QueryAlgorithm,
    f: &PartialFunction,
    x: &[Letter],
    reps: u64,
    seed: u64,
) -> Result<CertificateRun, ConstructionError> {
    check_input(f, x)?;
    let mass = if reps == 0 { Vec::new() } else { run_traced(alg, x)?.mass };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment = batch(&mass, x, reps, &mut rng)?;
    let is_cert = f.fixes_value(&assignment)?;
    Ok(CertificateRun { assignment, is_cert })
}

/// Repeats batches of `reps` repetitions until the assignment certifies
/// `f(x)`, then answers from the certificate. Never answers without one.
pub fn zero_error_wrapper(
    alg: &QueryAlgorithm,
    f: &PartialFunction,
    x: &[Letter],
    seed: u64,
    reps: u64,
    max_batches: usize,
) -> Result<ZeroErrorRun, ConstructionError> {
    check_input(f, x)?;
    let answer = |certificate: PartialAssignment, batches_used| {
        let value = f
            .entries()
            .find(|(y, _)| certificate.is_consistent_with(y))
            .map(|(_, v)| v)
            .expect("x itself is consistent");
        ZeroErrorRun { value, certificate, batches_used }
    };
    let empty = PartialAssignment::empty(f.n());
    if f.fixes_value(&empty)? {
        return Ok(answer(empty, 0));
    }
    if reps.is_zero() {
        return Err(ConstructionError::BadParameter("zero repetitions per batch".into()));
    }
    let mass = run_traced(alg, x)?.mass;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for b in 1..=max_batches {
        let a = batch(&mass, x, reps, &mut rng)?;
        if f.fixes_value(&a)? {
            return Ok(answer(a, b));
        }
    }
    Err(ConstructionError::BudgetExhausted { batches: max_batches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numopt::rat;
    use crate::qsim::{CMatrix, OutputSpec};

    #[test]
    fn repetition_count() {
        assert_eq!(repetitions(1, 4, &rat(4, 1)), 768);
        assert_eq!(repetitions(2, 1, &rat(2, 1)), 64 * 4 * 2);
        assert_eq!(repetitions(1, 1, &rat(0, 1)), 64);
    }

    #[test]
    fn zero_repetitions_and_constants() {
        let alg = QueryAlgorithm::new(2, 2, 1, vec![CMatrix::identity(4, 4)], OutputSpec::Pure).unwrap();
        let f = PartialFunction::or(2);
        let run = certificate_finder_p(&alg, &f, &[0, 1], 0, 3).unwrap();
        assert!(run.assignment.is_empty() && !run.is_cert);
        let c = PartialFunction::constant(2, true);
        let run = certificate_finder_p(&alg, &c, &[0, 1], 0, 3).unwrap();
        assert!(run.is_cert);
        let z = zero_error_wrapper(&alg, &c, &[1, 1], 0, 10, 1).unwrap();
        assert_eq!((z.value, z.batches_used), (true, 0));
    }

    #[test]
    fn budget_is_reported() {
        // Always queries position 0, so OR on 01 never gets certified.
        let alg = QueryAlgorithm::new(
            2,
            2,
            1,
            vec![CMatrix::identity(4, 4), CMatrix::identity(4, 4)],
            OutputSpec::Pure,
        )
        .unwrap();
        let f = PartialFunction::or(2);
        assert_eq!(
            zero_error_wrapper(&alg, &f, &[0, 1], 1, 5, 3),
            Err(ConstructionError::BudgetExhausted { batches: 3 })
        );
    }
}
