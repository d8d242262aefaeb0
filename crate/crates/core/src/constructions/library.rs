//! Small named algorithms used by the experiments and the CLI.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::qszk::ComplementInput;
use super::tree::DecisionTree;
use super::{collision_distinguisher, ConstructionError};
use crate::boolfn::{Block, Letter, PartialFunction};
use crate::measures::minimal_sensitive_blocks;
use crate::qsim::{random_unitary, CMatrix, Gate, OutputSpec, QueryAlgorithm};

/// Names accepted by [`named_algorithm`].
pub const ALGORITHM_NAMES: &[&str] =
    &["grover4", "grover4-half", "grover4-or", "deutsch", "and2", "rotation", "collision4"];

/// The basis permutation `|i, b, s⟩ ↦ |map(i, b, s)⟩`.
fn permutation(n: usize, q: usize, w: usize, map: impl Fn(usize, usize, usize) -> (usize, usize, usize)) -> Gate {
    let mut p = vec![0; n * q * w];
    for i in 0..n {
        for b in 0..q {
            for s in 0..w {
                let (i2, b2, s2) = map(i, b, s);
                p[i * q * w + b * w + s] = i2 * q * w + b2 * w + s2;
            }
        }
    }
    Gate::Permutation(p)
}

/// Uniform index superposition with the answer register in `|−⟩`, so the
/// query acts as the phase `(−1)^{x_i}`.
fn phase_query_start() -> Vec<Gate> {
    vec![Gate::ShiftAnswer, Gate::DftAnswer, Gate::DftIndex]
}

fn build(n: usize, q: usize, w: usize, steps: Vec<Vec<Gate>>) -> QueryAlgorithm {
    QueryAlgorithm::from_gates(n, q, w, steps, OutputSpec::Pure).expect("library algorithms are well formed")
}

/// One-query exact search on four positions: on a string with a single 1
/// the index register ends in the marked position.
pub fn grover4() -> QueryAlgorithm {
    build(4, 2, 1, vec![phase_query_start(), vec![Gate::DiffusionIndex]])
}

/// `grover4` followed by writing the high bit of the index into the answer
/// register. Computes [`half4`] exactly.
pub fn grover4_half() -> QueryAlgorithm {
    build(
        4,
        2,
        1,
        vec![
            phase_query_start(),
            vec![Gate::DiffusionIndex, Gate::DftAnswer, permutation(4, 2, 1, |i, b, s| (i, b ^ 1 ^ (i >> 1), s))],
        ],
    )
}

/// One query, answer = [index ≠ 0] after an inverse Fourier transform:
/// accepts `0000` with probability 0 and every single-1 string with 3/4.
pub fn grover4_or() -> QueryAlgorithm {
    build(
        4,
        2,
        1,
        vec![
            phase_query_start(),
            vec![
                Gate::IdftIndex,
                Gate::DftAnswer,
                permutation(4, 2, 1, |i, b, s| (i, if i == 0 { b ^ 1 } else { b }, s)),
            ],
        ],
    )
}

/// Exact one-query parity of two bits.
pub fn deutsch_parity() -> QueryAlgorithm {
    build(
        2,
        2,
        1,
        vec![
            phase_query_start(),
            vec![Gate::DftIndex, Gate::DftAnswer, permutation(2, 2, 1, |i, b, s| (i, b ^ 1 ^ i, s))],
        ],
    )
}

/// Classical two-query AND of two bits, run reversibly with one workspace bit.
pub fn and2_classical() -> QueryAlgorithm {
    // After query 1 the state is |0, x_0, 0⟩; move x_0 to the workspace and
    // point the index at position 1.
    let park = permutation(2, 2, 2, |i, b, s| (i ^ 1, s, s ^ b));
    // |1, x_1, x_0⟩: swap |1,1,0⟩ with the unused |0,0,0⟩ so the answer bit
    // becomes x_0 ∧ x_1.
    let and = permutation(2, 2, 2, |i, b, s| match (i, b, s) {
        (1, 1, 0) => (0, 0, 0),
        (0, 0, 0) => (1, 1, 0),
        other => other,
    });
    build(2, 2, 2, vec![vec![Gate::Identity], vec![park], vec![and]])
}

/// One query of the 1-bit identity followed by a rotation: accepts 1 with
/// probability 2/3 and 0 with probability 1/3.
pub fn rotation_identity() -> QueryAlgorithm {
    let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    let r = CMatrix::from_row_slice(2, 2, &[a, -b, b, a].map(|v| Complex64::new(v, 0.0)));
    QueryAlgorithm::new(1, 2, 1, vec![CMatrix::identity(2, 2), r], OutputSpec::Pure)
        .expect("rotation is unitary")
}

/// Haar-random unitaries on `n · 2 · w` dimensions.
pub fn random_algorithm(n: usize, w: usize, queries: usize, seed: u64) -> Result<QueryAlgorithm, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = n * 2 * w;
    let unitaries = (0..=queries).map(|_| random_unitary(d, &mut rng)).collect();
    Ok(QueryAlgorithm::new(n, 2, w, unitaries, OutputSpec::Pure)?)
}

/// Strings of length 4 with a single 1; the value is 1 when the 1 is in the
/// second half.
pub fn half4() -> PartialFunction {
    let listing = (0..4).map(|j| {
        let mut x = vec![0; 4];
        x[j] = 1;
        (x, j >= 2)
    });
    PartialFunction::new(4, 2, listing).expect("valid listing").with_name("HALF4")
}

/// A named algorithm with the function it computes or distinguishes.
pub fn named_algorithm(name: &str) -> Option<(QueryAlgorithm, PartialFunction)> {
    Some(match name {
        "grover4" => (grover4(), PartialFunction::unique_marked_or(4)),
        "grover4-half" => (grover4_half(), half4()),
        "grover4-or" => (grover4_or(), PartialFunction::unique_marked_or(4)),
        "deutsch" => (deutsch_parity(), PartialFunction::parity(2)),
        "and2" => (and2_classical(), PartialFunction::and(2)),
        "rotation" => (rotation_identity(), PartialFunction::identity()),
        "collision4" => (
            collision_distinguisher(4).expect("4 is a power of two"),
            PartialFunction::collision(4).expect("fits the cap"),
        ),
        _ => return None,
    })
}

/// Purifications on `answer ⊗ workspace` (`B` = answer, `C` = two workspace
/// qubits) for the 1-bit identity: `ρ_x = σ_x` when `x = 0` and `ρ_x ⊥ σ_x`
/// when `x = 1`.
pub fn complement_example() -> ComplementInput {
    // Bit layout of the 8 basis states: b, c1, c0.
    let cnot = permutation(1, 2, 4, |i, b, s| (i, b, s ^ b));
    let swap_b_c1 = permutation(1, 2, 4, |i, b, s| (i, s >> 1, (b << 1) | (s & 1)));
    // (|0⟩|00⟩ − |1⟩|01⟩)/√2 with no queries.
    let r = build(1, 2, 4, vec![vec![Gate::DftAnswer, cnot.clone(), Gate::PhaseAnswer]]);
    // (|0⟩|x0⟩ + |1⟩|x1⟩)/√2 with one query.
    let s = build(1, 2, 4, vec![vec![Gate::Identity], vec![swap_b_c1, Gate::DftAnswer, cnot]]);
    ComplementInput { r, s, b_dim: 2 }
}

/// Zero-error tree for `f_sab` over `{0,1,*,†}`: reads positions in order
/// and answers at the first sabotaged one.
pub fn read_all_sab_tree(n: usize) -> DecisionTree<Letter> {
    fn node(i: usize, n: usize) -> DecisionTree<Letter> {
        if i == n {
            return DecisionTree::Leaf(0);
        }
        DecisionTree::Query {
            position: i,
            children: vec![node(i + 1, n), node(i + 1, n), DecisionTree::Leaf(0), DecisionTree::Leaf(1)],
        }
    }
    node(0, n)
}

/// Reads positions `first` then `second` of a binary input and outputs the
/// two bits as the letter `2·x_first + x_second`.
pub fn read_pair_tree(first: usize, second: usize) -> DecisionTree<Letter> {
    let inner = |hi: Letter| DecisionTree::Query {
        position: second,
        children: vec![DecisionTree::Leaf(2 * hi), DecisionTree::Leaf(2 * hi + 1)],
    };
    DecisionTree::Query { position: first, children: vec![inner(0), inner(1)] }
}

pub fn read_both_tree() -> DecisionTree<Letter> {
    read_pair_tree(0, 1)
}

/// Reads position 0 only and outputs it.
pub fn read_first_tree() -> DecisionTree<Letter> {
    DecisionTree::Query { position: 0, children: vec![DecisionTree::Leaf(0), DecisionTree::Leaf(1)] }
}

/// An algorithm, an input and a sensitive block for the hybrid check.
#[derive(Debug, Clone)]
pub struct HybridCase {
    pub label: String,
    pub algorithm: QueryAlgorithm,
    pub x: Vec<Letter>,
    pub block: Block,
}

fn cases_for(label: &str, alg: &QueryAlgorithm, f: &PartialFunction) -> Result<Vec<HybridCase>, ConstructionError> {
    let mut out = Vec::new();
    for x in f.domain() {
        for block in minimal_sensitive_blocks(f, &x)?.blocks {
            out.push(HybridCase { label: label.to_string(), algorithm: alg.clone(), x: x.clone(), block });
        }
    }
    Ok(out)
}

/// Every binary library algorithm on every domain input and minimal
/// sensitive block of its function, plus seeded random two-query
/// algorithms for OR on 2, 3 and 4 positions.
pub fn hybrid_suite() -> Result<Vec<HybridCase>, ConstructionError> {
    let mut out = Vec::new();
    for name in ALGORITHM_NAMES.iter().filter(|n| **n != "collision4") {
        let (alg, f) = named_algorithm(name).expect("listed");
        out.extend(cases_for(name, &alg, &f)?);
    }
    for (k, n) in [2usize, 3, 4, 2, 3, 4].into_iter().enumerate() {
        let alg = random_algorithm(n, 2, 2, 1000 + k as u64)?;
        out.extend(cases_for(&format!("random{n}-{k}"), &alg, &PartialFunction::or(n))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{acceptance_probability, run_traced};

    fn index_distribution(alg: &QueryAlgorithm, x: &[Letter]) -> Vec<f64> {
        let psi = run_traced(alg, x).unwrap().final_state().clone();
        crate::qsim::index_masses(&psi, alg.n(), alg.q(), alg.w())
    }

    #[test]
    fn grover_finds_the_marked_position() {
        for j in 0..4 {
            let mut x = vec![0; 4];
            x[j] = 1;
            let p = index_distribution(&grover4(), &x);
            assert!((p[j] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_algorithms_compute_their_functions() {
        for name in ["grover4-half", "deutsch", "and2"] {
            let (alg, f) = named_algorithm(name).unwrap();
            for (x, v) in f.entries() {
                let p = acceptance_probability(&alg, &x).unwrap();
                assert!((p - v as u8 as f64).abs() < 1e-12, "{name} on {x:?}: {p}");
            }
        }
    }

    #[test]
    fn bounded_error_probabilities() {
        let p = |alg: &QueryAlgorithm, x: &[Letter]| acceptance_probability(alg, x).unwrap();
        assert!(p(&grover4_or(), &[0, 0, 0, 0]).abs() < 1e-12);
        assert!((p(&grover4_or(), &[0, 0, 1, 0]) - 0.75).abs() < 1e-12);
        assert!((p(&rotation_identity(), &[1]) - 2.0 / 3.0).abs() < 1e-12);
        assert!((p(&rotation_identity(), &[0]) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn suite_is_large_enough() {
        assert!(hybrid_suite().unwrap().len() >= 20);
    }
}
