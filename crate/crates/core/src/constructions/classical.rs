//! The two directions relating zero-error algorithms for `f_sab` to
//! randomized distinguishers for `f`, computed with exact probabilities.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::tree::{run_tree, DecisionTree, RandomizedAlgorithm};
use super::{word, ConstructionError};
use crate::boolfn::{sabotage, Letter, PartialAssignment, PartialFunction};
use crate::numopt::{rat, Rational};

/// `½ Σ |a(o) - b(o)|`.
pub fn total_variation<O: Ord>(a: &BTreeMap<O, Rational>, b: &BTreeMap<O, Rational>) -> Rational {
    let zero = Rational::zero();
    let mut sum = Rational::zero();
    for (o, p) in a {
        sum += (p - b.get(o).unwrap_or(&zero)).abs();
    }
    for (o, p) in b {
        if !a.contains_key(o) {
            sum += p.abs();
        }
    }
    sum / Rational::from_integer(2.into())
}

/// Smallest total variation distance between output distributions on a
/// 0-input and a 1-input, with the pair attaining it. `None` if `f` is constant.
pub fn cross_tv<O: Clone + Ord>(
    alg: &RandomizedAlgorithm<O>,
    f: &PartialFunction,
) -> Result<Option<(Rational, Vec<Letter>, Vec<Letter>)>, ConstructionError> {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (x, v) in f.entries() {
        let d = alg.output_distribution(&x)?;
        if v { ones.push((x, d)) } else { zeros.push((x, d)) }
    }
    let mut best: Option<(Rational, Vec<Letter>, Vec<Letter>)> = None;
    for (x, dx) in &zeros {
        for (y, dy) in &ones {
            let tv = total_variation(dx, dy);
            if best.as_ref().is_none_or(|b| tv < b.0) {
                best = Some((tv, x.clone(), y.clone()));
            }
        }
    }
    Ok(best)
}

/// Largest expected query count over the domain of `f`.
pub fn expected_cost<O: Clone>(a: &RandomizedAlgorithm<O>, f: &PartialFunction) -> Result<Rational, ConstructionError> {
    let mut worst = Rational::zero();
    for x in f.domain() {
        worst = worst.max(a.expected_queries(&x)?);
    }
    Ok(worst)
}

/// Every tree of `a` outputs `g(z)` (as letter 0 or 1) on every domain input.
pub fn validate_zero_error(a: &RandomizedAlgorithm<Letter>, g: &PartialFunction) -> Result<(), ConstructionError> {
    a.validate(g.n(), g.q())?;
    for (z, v) in g.entries() {
        for (p, t) in a.trees() {
            if p.is_zero() {
                continue;
            }
            let (o, _) = run_tree(t, &z)?;
            if o != v as Letter {
                return Err(ConstructionError::NotZeroError(word(&z, g.q())));
            }
        }
    }
    Ok(())
}

fn truncate(tree: &DecisionTree<Letter>, budget: usize, read: PartialAssignment) -> DecisionTree<PartialAssignment> {
    match tree {
        DecisionTree::Query { position, children } if budget > 0 => DecisionTree::Query {
            position: *position,
            children: (0..2u8)
                .map(|b| match read.get(*position) {
                    // A repeated read can only see the letter already read.
                    Some(l) if l != b => DecisionTree::Leaf(read.clone()),
                    _ => {
                        let mut next = read.clone();
                        next.set(*position, b).expect("consistent with the path");
                        truncate(&children[b as usize], budget - 1, next)
                    }
                })
                .collect(),
        },
        _ => DecisionTree::Leaf(read),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RdTransform {
    /// Outputs the partial assignment read, over binary inputs.
    pub algorithm: RandomizedAlgorithm<PartialAssignment>,
    pub budget: usize,
    /// Largest expected query count of the input algorithm on `f_sab`.
    pub cost: Rational,
    /// Zero when `f` is constant.
    pub min_cross_tv: Rational,
    pub worst_pair: Option<(Vec<Letter>, Vec<Letter>)>,
    /// Set when the budget is 0, so every output is the empty assignment.
    pub degenerate: bool,
}

/// Truncates each tree of a zero-error algorithm for `f_sab` after `budget`
/// queries and relabels every leaf with the assignment read on the way.
pub fn rs_to_rd_transform(
    a: &RandomizedAlgorithm<Letter>,
    f: &PartialFunction,
    budget: usize,
) -> Result<RdTransform, ConstructionError> {
    let g = sabotage(f)?;
    validate_zero_error(a, &g)?;
    let cost = expected_cost(a, &g)?;
    let trees = a
        .trees()
        .iter()
        .map(|(p, t)| (p.clone(), truncate(t, budget, PartialAssignment::empty(f.n()))))
        .collect();
    let algorithm = RandomizedAlgorithm::new(trees)?;
    let (min_cross_tv, worst_pair) = match cross_tv(&algorithm, f)? {
        Some((tv, x, y)) => (tv, Some((x, y))),
        None => (Rational::zero(), None),
    };
    Ok(RdTransform { algorithm, budget, cost, min_cross_tv, worst_pair, degenerate: budget == 0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitReport {
    /// Probability that one run on `z` reads a `*` or `†`, per sabotaged input.
    pub per_input: Vec<(Vec<Letter>, Rational)>,
    /// Minimum of `per_input`.
    pub hit_prob_per_run: Rational,
    pub min_cross_tv: Rational,
    /// Largest expected query count of the distinguisher on `Dom(f)`.
    pub cost: Rational,
    /// `12 · cost`, the repeat-until-hit budget.
    pub expected_queries: Rational,
    /// `hit_prob_per_run >= 1/12`.
    pub pass: bool,
}

fn hits<O>(tree: &DecisionTree<O>, z: &[Letter]) -> bool {
    let mut node = tree;
    loop {
        match node {
            DecisionTree::Leaf(_) => return false,
            DecisionTree::Query { position, children } => {
                let l = z[*position];
                if l >= 2 {
                    return true;
                }
                node = &children[l as usize];
            }
        }
    }
}

/// Checks that `b` distinguishes `f` with total variation at least 1/6 and
/// computes, for every sabotaged input, the probability that one run reads
/// a sabotaged position.
pub fn rd_to_rs_transform<O: Clone + Ord>(
    b: &RandomizedAlgorithm<O>,
    f: &PartialFunction,
) -> Result<HitReport, ConstructionError> {
    b.validate(f.n(), 2)?;
    let g = sabotage(f)?;
    let (min_cross_tv, x, y) = cross_tv(b, f)?.expect("sabotage rejects constant functions");
    if min_cross_tv < rat(1, 6) {
        return Err(ConstructionError::DistinguishingPromiseViolated {
            x: word(&x, 2),
            y: word(&y, 2),
            tv: min_cross_tv.to_string(),
        });
    }
    let per_input: Vec<(Vec<Letter>, Rational)> = g
        .domain()
        .map(|z| {
            let p = b.trees().iter().filter(|(_, t)| hits(t, &z)).map(|(p, _)| p.clone()).sum();
            (z, p)
        })
        .collect();
    let hit_prob_per_run = per_input.iter().map(|(_, p)| p.clone()).min().expect("nonempty domain");
    let cost = expected_cost(b, f)?;
    Ok(HitReport {
        pass: hit_prob_per_run >= rat(1, 12),
        hit_prob_per_run,
        min_cross_tv,
        expected_queries: &cost * Rational::from_integer(12.into()),
        cost,
        per_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::library::{read_all_sab_tree, read_both_tree, read_first_tree};

    #[test]
    fn tv_basics() {
        let a: BTreeMap<u8, Rational> = [(0, rat(1, 2)), (1, rat(1, 2))].into_iter().collect();
        let b: BTreeMap<u8, Rational> = [(1, rat(1, 1))].into_iter().collect();
        assert_eq!(total_variation(&a, &b), rat(1, 2));
        assert_eq!(total_variation(&a, &a), rat(0, 1));
    }

    #[test]
    fn and2_round_trip() {
        let f = PartialFunction::and(2);
        let a = RandomizedAlgorithm::deterministic(read_all_sab_tree(2));
        let rd = rs_to_rd_transform(&a, &f, 4).unwrap();
        assert_eq!(rd.cost, rat(2, 1));
        assert_eq!(rd.min_cross_tv, rat(1, 1));
        let hit = rd_to_rs_transform(&rd.algorithm, &f).unwrap();
        assert_eq!(hit.hit_prob_per_run, rat(1, 1));
        assert!(hit.pass);
    }

    #[test]
    fn zero_budget_is_degenerate() {
        let f = PartialFunction::and(2);
        let a = RandomizedAlgorithm::deterministic(read_all_sab_tree(2));
        let rd = rs_to_rd_transform(&a, &f, 0).unwrap();
        assert!(rd.degenerate);
        assert_eq!(rd.min_cross_tv, rat(0, 1));
    }

    #[test]
    fn single_position_reader_is_rejected() {
        let f = PartialFunction::and(2);
        let b = RandomizedAlgorithm::deterministic(read_first_tree());
        match rd_to_rs_transform(&b, &f) {
            Err(ConstructionError::DistinguishingPromiseViolated { tv, .. }) => assert_eq!(tv, "0"),
            other => panic!("{other:?}"),
        }
        let ok = RandomizedAlgorithm::deterministic(read_both_tree());
        assert!(rd_to_rs_transform(&ok, &f).unwrap().pass);
    }

    #[test]
    fn wrong_algorithm_is_not_zero_error() {
        let f = PartialFunction::and(2);
        let a = RandomizedAlgorithm::deterministic(DecisionTree::Leaf(0));
        assert!(matches!(rs_to_rd_transform(&a, &f, 2), Err(ConstructionError::NotZeroError(_))));
    }
}
