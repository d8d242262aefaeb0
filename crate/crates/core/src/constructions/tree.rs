//! Classical query algorithms as decision trees and distributions over them.
//!
//! Text form: `leaf S` or `query P { child_0 ... child_{q-1} }` with 1-based
//! positions `P` and letter symbols `S` (`0`, `1`, `*`, `†`, ...). A
//! randomized algorithm is a list of `weight a/b` lines, each followed by a
//! tree. `#` starts a comment.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ConstructionError;
use crate::boolfn::{format_word, parse_word, Letter, PartialAssignment};
use crate::numopt::Rational;

/// Deepest nesting the parser accepts.
pub const MAX_TREE_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree<O> {
    Leaf(O),
    /// Reads `position` and continues in the child indexed by the letter read.
    Query { position: usize, children: Vec<DecisionTree<O>> },
}

impl<O: Clone> DecisionTree<O> {
    /// Checks positions against `n` and child counts against `q`.
    pub fn validate(&self, n: usize, q: u8) -> Result<(), ConstructionError> {
        match self {
            Self::Leaf(_) => Ok(()),
            Self::Query { position, children } => {
                if *position >= n {
                    return Err(ConstructionError::BadParameter(format!("position {} beyond n = {n}", position + 1)));
                }
                if children.len() != q as usize {
                    return Err(ConstructionError::BadParameter(format!(
                        "query node has {} children, expected {q}",
                        children.len()
                    )));
                }
                children.iter().try_for_each(|c| c.validate(n, q))
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Leaf(_) => 0,
            Self::Query { children, .. } => 1 + children.iter().map(Self::depth).max().unwrap_or(0),
        }
    }
}

impl DecisionTree<Letter> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            Self::Leaf(s) => out.push_str(&format!("{pad}leaf {}\n", format_word(&[*s], 4))),
            Self::Query { position, children } => {
                out.push_str(&format!("{pad}query {} {{\n", position + 1));
                children.iter().for_each(|c| c.write(out, indent + 1));
                out.push_str(&format!("{pad}}}\n"));
            }
        }
    }
}

/// Runs a tree on `x`, returning the leaf and the letters read.
pub fn run_tree<O: Clone>(tree: &DecisionTree<O>, x: &[Letter]) -> Result<(O, PartialAssignment), ConstructionError> {
    let mut node = tree;
    let mut read = PartialAssignment::empty(x.len());
    loop {
        match node {
            DecisionTree::Leaf(o) => return Ok((o.clone(), read)),
            DecisionTree::Query { position, children } => {
                let letter = *x.get(*position).ok_or_else(|| {
                    ConstructionError::BadParameter(format!("position {} beyond input length", position + 1))
                })?;
                read.set(*position, letter)?;
                node = children.get(letter as usize).ok_or_else(|| {
                    ConstructionError::BadParameter(format!("no child for letter {letter}"))
                })?;
            }
        }
    }
}

/// A probability distribution over decision trees, with exact weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedAlgorithm<O> {
    trees: Vec<(Rational, DecisionTree<O>)>,
}

impl<O: Clone> RandomizedAlgorithm<O> {
    /// Weights must be nonnegative and sum to exactly 1.
    pub fn new(trees: Vec<(Rational, DecisionTree<O>)>) -> Result<Self, ConstructionError> {
        if trees.iter().any(|(p, _)| p.is_negative()) {
            return Err(ConstructionError::BadParameter("negative weight".into()));
        }
        let total: Rational = trees.iter().map(|(p, _)| p.clone()).sum();
        if !total.is_one() {
            return Err(ConstructionError::BadParameter(format!("weights sum to {total}")));
        }
        Ok(Self { trees })
    }

    pub fn deterministic(tree: DecisionTree<O>) -> Self {
        Self { trees: vec![(Rational::one(), tree)] }
    }

    pub fn trees(&self) -> &[(Rational, DecisionTree<O>)] {
        &self.trees
    }

    pub fn validate(&self, n: usize, q: u8) -> Result<(), ConstructionError> {
        self.trees.iter().try_for_each(|(_, t)| t.validate(n, q))
    }

    /// Exact expected number of queries on `x`.
    pub fn expected_queries(&self, x: &[Letter]) -> Result<Rational, ConstructionError> {
        let mut total = Rational::zero();
        for (p, t) in &self.trees {
            let (_, read) = run_tree(t, x)?;
            total += p * Rational::from_integer((read.len() as i64).into());
        }
        Ok(total)
    }
}

impl<O: Clone + Ord> RandomizedAlgorithm<O> {
    /// Exact output distribution on `x`.
    pub fn output_distribution(&self, x: &[Letter]) -> Result<BTreeMap<O, Rational>, ConstructionError> {
        let mut dist = BTreeMap::new();
        for (p, t) in &self.trees {
            let (o, _) = run_tree(t, x)?;
            *dist.entry(o).or_insert_with(Rational::zero) += p;
        }
        dist.retain(|_, p: &mut Rational| !p.is_zero());
        Ok(dist)
    }
}

impl RandomizedAlgorithm<Letter> {
    pub fn to_text(&self) -> String {
        self.trees
            .iter()
            .map(|(p, t)| format!("weight {p}\n{}", t.to_text()))
            .collect()
    }
}

/// Samples a tree with probability equal to its weight and runs it.
pub fn run_randomized<O: Clone>(
    a: &RandomizedAlgorithm<O>,
    x: &[Letter],
    seed: u64,
) -> Result<(O, PartialAssignment), ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let positive = a.trees.iter().filter(|(p, _)| !p.is_zero());
    let mut chosen = None;
    for (p, t) in positive {
        acc += p.to_f64().unwrap_or(0.0);
        chosen = Some(t);
        if u < acc {
            break;
        }
    }
    run_tree(chosen.expect("weights sum to 1"), x)
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(k, l)| l.split('#').next().unwrap_or("").split_whitespace().map(move |t| (k + 1, t)))
            .collect();
        Self { items, at: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.at).map(|t| t.1)
    }

    fn line(&self) -> usize {
        self.items.get(self.at).or(self.items.last()).map_or(1, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ConstructionError> {
        let line = self.line();
        let t = self.items.get(self.at).ok_or_else(|| err(line, format!("expected {what}, found end of input")))?;
        self.at += 1;
        Ok(t.1)
    }
}

fn err(line: usize, message: impl Into<String>) -> ConstructionError {
    ConstructionError::Parse { line, message: message.into() }
}

fn parse_node(tok: &mut Tokens, n: usize, q: u8, depth: usize) -> Result<DecisionTree<Letter>, ConstructionError> {
    if depth > MAX_TREE_DEPTH {
        return Err(err(tok.line(), "tree nested too deeply"));
    }
    let line = tok.line();
    match tok.next("leaf or query")? {
        "leaf" => {
            let line = tok.line();
            let sym = tok.next("leaf symbol")?;
            match parse_word(sym).as_deref() {
                Some([l]) => Ok(DecisionTree::Leaf(*l)),
                _ => Err(err(line, format!("bad leaf symbol {sym:?}"))),
            }
        }
        "query" => {
            let line = tok.line();
            let pos = tok.next("position")?;
            let position = match pos.parse::<usize>() {
                Ok(p) if p >= 1 && p <= n => p - 1,
                _ => return Err(err(line, format!("bad position {pos:?} for n = {n}"))),
            };
            if tok.next("'{'")? != "{" {
                return Err(err(line, "expected '{' after the position"));
            }
            let mut children = Vec::new();
            while tok.peek() != Some("}") {
                if children.len() == q as usize {
                    return Err(err(tok.line(), format!("more than {q} children")));
                }
                children.push(parse_node(tok, n, q, depth + 1)?);
            }
            tok.next("'}'")?;
            if children.len() != q as usize {
                return Err(err(line, format!("query has {} children, expected {q}", children.len())));
            }
            Ok(DecisionTree::Query { position, children })
        }
        other => Err(err(line, format!("expected leaf or query, found {other:?}"))),
    }
}

/// Parses one tree over inputs of length `n` and alphabet `q`.
pub fn parse_tree(text: &str, n: usize, q: u8) -> Result<DecisionTree<Letter>, ConstructionError> {
    let mut tok = Tokens::new(text);
    let tree = parse_node(&mut tok, n, q, 0)?;
    match tok.peek() {
        None => Ok(tree),
        Some(t) => Err(err(tok.line(), format!("trailing {t:?}"))),
    }
}

/// Parses a weighted list of trees.
pub fn parse_randomized(text: &str, n: usize, q: u8) -> Result<RandomizedAlgorithm<Letter>, ConstructionError> {
    let mut tok = Tokens::new(text);
    let mut trees = Vec::new();
    while tok.peek().is_some() {
        let line = tok.line();
        if tok.next("weight")? != "weight" {
            return Err(err(line, "expected 'weight'"));
        }
        let w = tok.next("weight value")?;
        let p: Rational = w.parse().map_err(|_| err(line, format!("bad weight {w:?}")))?;
        trees.push((p, parse_node(&mut tok, n, q, 0)?));
    }
    let line = tok.line();
    RandomizedAlgorithm::new(trees).map_err(|e| err(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numopt::rat;

    fn read_both() -> DecisionTree<Letter> {
        let second = |a: u8| DecisionTree::Query {
            position: 1,
            children: vec![DecisionTree::Leaf(0), DecisionTree::Leaf(a)],
        };
        DecisionTree::Query { position: 0, children: vec![second(0), second(1)] }
    }

    #[test]
    fn runs_record_reads() {
        let (o, read) = run_tree(&DecisionTree::Leaf(1u8), &[0, 1]).unwrap();
        assert_eq!((o, read.len()), (1, 0));
        let (o, read) = run_tree(&read_both(), &[1, 1]).unwrap();
        assert_eq!(o, 1);
        assert_eq!(read, PartialAssignment::from_input(&[1, 1], [0, 1]));
    }

    #[test]
    fn mixture_distribution_is_exact() {
        let a = RandomizedAlgorithm::new(vec![
            (rat(1, 2), DecisionTree::Leaf(0u8)),
            (rat(1, 2), read_both()),
        ])
        .unwrap();
        let d = a.output_distribution(&[1, 1]).unwrap();
        assert_eq!(d[&0], rat(1, 2));
        assert_eq!(d[&1], rat(1, 2));
        assert_eq!(a.expected_queries(&[1, 1]).unwrap(), rat(1, 1));
        assert!(RandomizedAlgorithm::new(vec![(rat(1, 3), DecisionTree::Leaf(0u8))]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = read_both();
        assert_eq!(parse_tree(&t.to_text(), 2, 2).unwrap(), t);
        let a = RandomizedAlgorithm::new(vec![(rat(1, 3), t.clone()), (rat(2, 3), DecisionTree::Leaf(3))]).unwrap();
        assert_eq!(parse_randomized(&a.to_text(), 2, 2).unwrap(), a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_tree("query 3 { leaf 0 leaf 1 }", 2, 2), Err(ConstructionError::Parse { .. })));
        assert!(matches!(parse_tree("query 1 { leaf 0 }", 2, 2), Err(ConstructionError::Parse { .. })));
        assert!(matches!(parse_tree("query 1 {\n leaf 0\n leaf 1\n leaf 1 }", 2, 2), Err(ConstructionError::Parse { line: 4, .. })));
        assert!(matches!(parse_tree("leaf 0 leaf 1", 2, 2), Err(ConstructionError::Parse { .. })));
        assert!(parse_tree(&"query 1 { ".repeat(100), 2, 2).is_err());
        assert!(parse_randomized("weight 1/2\nleaf 0\n", 2, 2).is_err());
    }
}
