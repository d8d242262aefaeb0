use std::collections::HashMap;

use num_traits::Zero;

use super::{MeasureError, MeasureReport, Provenance};
use crate::boolfn::{Block, Letter, PartialAssignment, PartialFunction};
use crate::numopt::{lp_solve, LpOutcome, RationalLP, Rational, Relation};

/// Inclusion-minimal sensitive blocks of one input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitiveBlockSet {
    pub x: Vec<Letter>,
    pub blocks: Vec<Block>,
}

impl SensitiveBlockSet {
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Block::len).max().unwrap_or(0)
    }

    pub fn masks(&self) -> Vec<u64> {
        self.blocks.iter().map(Block::mask).collect()
    }
}

fn require_binary(f: &PartialFunction) -> Result<(), MeasureError> {
    if f.is_binary() {
        Ok(())
    } else {
        Err(MeasureError::AlphabetUnsupported(f.q()))
    }
}

/// Deterministic query complexity `D(f)` by memoized minimax over restrictions.
pub fn dtree_complexity(f: &PartialFunction) -> MeasureReport {
    let mut memo = HashMap::new();
    let d = dtree_depth(f, &mut memo);
    MeasureReport::exact_int("D", d as u64, Provenance::ExactEnumeration)
}

fn dtree_depth(f: &PartialFunction, memo: &mut HashMap<PartialFunction, u32>) -> u32 {
    if f.constant_value().is_some() {
        return 0;
    }
    if let Some(&d) = memo.get(f) {
        return d;
    }
    let mut best = u32::MAX;
    for pos in 0..f.n() {
        let mut worst = 0;
        let mut useful = false;
        for letter in 0..f.q() {
            let Ok(g) = f.restrict(pos, letter) else { continue };
            if g.domain_size() < f.domain_size() {
                useful = true;
            }
            worst = worst.max(dtree_depth(&g, memo));
            if 1 + worst >= best {
                break;
            }
        }
        // A position that takes a single letter on the whole domain reveals nothing.
        if useful {
            best = best.min(1 + worst);
        }
    }
    memo.insert(f.clone(), best);
    best
}

/// Positions where two strings of `f` differ, as a bitmask (bit `i` = position `i`).
fn diff_mask(f: &PartialFunction, a: u64, b: u64) -> u64 {
    (0..f.n())
        .filter(|&i| f.letter(a, i) != f.letter(b, i))
        .fold(0, |m, i| m | 1 << i)
}

/// Masks in order of increasing popcount, ties by value.
fn masks_by_weight(n: usize) -> impl Iterator<Item = u64> {
    (0..=n).flat_map(move |k| {
        let mut v: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize == k).collect();
        v.sort_unstable();
        v
    })
}

/// A minimum-size certificate of `x`: the positions of `x` that every
/// opposite-valued domain string disagrees with somewhere.
pub fn find_certificate(f: &PartialFunction, x: &[Letter]) -> Result<PartialAssignment, MeasureError> {
    let code = f.encode(x)?;
    let fx = f.value_at_code(code).ok_or_else(|| MeasureError::OutOfDomain(x.to_vec()))?;
    let diffs: Vec<u64> = f
        .codes()
        .iter()
        .filter(|e| e.1 != fx)
        .map(|e| diff_mask(f, code, e.0))
        .collect();
    let mask = masks_by_weight(f.n())
        .find(|&s| diffs.iter().all(|d| d & s != 0))
        .expect("the full set of positions is a certificate");
    Ok(PartialAssignment::from_input(x, (0..f.n()).filter(|i| mask >> i & 1 == 1)))
}

/// `C(f)`, the largest minimum certificate over the domain.
pub fn certificate_complexity(f: &PartialFunction) -> MeasureReport {
    let c = f
        .domain()
        .map(|x| find_certificate(f, &x).expect("domain input").len())
        .max()
        .unwrap_or(0);
    MeasureReport::exact_int("C", c as u64, Provenance::ExactEnumeration)
}

/// Whether `a` fixes the value of `f`.
pub fn is_certificate(f: &PartialFunction, a: &PartialAssignment) -> Result<bool, MeasureError> {
    f.fixes_value(a).map_err(|e| match e {
        crate::boolfn::BoolFnError::EmptyDomain => MeasureError::InconsistentAssignment,
        other => other.into(),
    })
}

fn sensitive_count(f: &PartialFunction, code: u64, value: bool) -> usize {
    (0..f.n())
        .filter(|&i| f.value_at_code(f.flip_code(code, 1 << i)) == Some(!value))
        .count()
}

/// `s(f)`.
pub fn sensitivity(f: &PartialFunction) -> Result<MeasureReport, MeasureError> {
    require_binary(f)?;
    let s = f.codes().iter().map(|&(c, v)| sensitive_count(f, c, v)).max().unwrap_or(0);
    Ok(MeasureReport::exact_int("s", s as u64, Provenance::ExactEnumeration))
}

fn minimal_block_masks(f: &PartialFunction, code: u64, value: bool) -> Vec<u64> {
    let mut found: Vec<u64> = Vec::new();
    for mask in masks_by_weight(f.n()).skip(1) {
        if found.iter().any(|&b| b & mask == b) {
            continue;
        }
        if f.value_at_code(f.flip_code(code, mask)) == Some(!value) {
            found.push(mask);
        }
    }
    found
}

/// All inclusion-minimal sensitive blocks of `x`, smallest first.
pub fn minimal_sensitive_blocks(
    f: &PartialFunction,
    x: &[Letter],
) -> Result<SensitiveBlockSet, MeasureError> {
    require_binary(f)?;
    let code = f.encode(x)?;
    let value = f.value_at_code(code).ok_or_else(|| MeasureError::OutOfDomain(x.to_vec()))?;
    let blocks = minimal_block_masks(f, code, value)
        .into_iter()
        .map(|m| Block::from_mask(m).expect("nonempty"))
        .collect();
    Ok(SensitiveBlockSet { x: x.to_vec(), blocks })
}

/// Largest number of pairwise disjoint blocks among `blocks`.
pub fn max_disjoint_blocks(blocks: &[u64], n: usize) -> usize {
    fn go(avail: u64, blocks: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
        let usable: Vec<u64> = blocks.iter().copied().filter(|&b| b & avail == b).collect();
        if usable.is_empty() {
            return 0;
        }
        if let Some(&v) = memo.get(&avail) {
            return v;
        }
        let covered = usable.iter().fold(0, |m, b| m | b);
        let p = covered.trailing_zeros();
        // Either p stays uncovered, or exactly one chosen block covers it.
        let mut best = go(avail & !(1 << p), blocks, memo);
        for &b in usable.iter().filter(|&&b| b >> p & 1 == 1) {
            best = best.max(1 + go(avail & !b, blocks, memo));
        }
        memo.insert(avail, best);
        best
    }
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(full, blocks, &mut HashMap::new())
}

/// `bs(f)`, by exact disjoint packing of minimal sensitive blocks.
pub fn block_sensitivity(f: &PartialFunction) -> Result<MeasureReport, MeasureError> {
    require_binary(f)?;
    let bs = f
        .codes()
        .iter()
        .map(|&(c, v)| max_disjoint_blocks(&minimal_block_masks(f, c, v), f.n()))
        .max()
        .unwrap_or(0);
    Ok(MeasureReport::exact_int("bs", bs as u64, Provenance::ExactEnumeration))
}

/// Fractional packing value of the minimal sensitive blocks at one input.
pub fn fractional_block_sensitivity_at(f: &PartialFunction, x: &[Letter]) -> Result<Rational, MeasureError> {
    let blocks = minimal_sensitive_blocks(f, x)?.masks();
    Ok(fractional_packing(&blocks, f.n()))
}

fn fractional_packing(blocks: &[u64], n: usize) -> Rational {
    if blocks.is_empty() {
        return Rational::zero();
    }
    let one = Rational::from_integer(1.into());
    let mut lp = RationalLP::new(blocks.len()).nonnegative().maximize(vec![one.clone(); blocks.len()]);
    for i in 0..n {
        let terms: Vec<(usize, Rational)> = blocks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >> i & 1 == 1)
            .map(|(j, _)| (j, one.clone()))
            .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, one.clone());
        }
    }
    match lp_solve(&lp) {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("packing LP is feasible and bounded: {other:?}"),
    }
}

/// `fbs(f)`, reported as the stand-in for randomized certificate complexity.
pub fn fractional_block_sensitivity(f: &PartialFunction) -> Result<MeasureReport, MeasureError> {
    require_binary(f)?;
    let best = f
        .codes()
        .iter()
        .map(|&(c, v)| fractional_packing(&minimal_block_masks(f, c, v), f.n()))
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(MeasureReport::exact_rational("fbs", best, Provenance::Proxy("Θ of RC".into())))
}
