use num_traits::ToPrimitive;
use proptest::prelude::*;

use querybench::boolfn::{compose_full, sabotage, PartialFunction, DEFAULT_DOMAIN_CAP};
use querybench::measures::{
    approx_degree, approx_degree_fourier, block_sensitivity, certificate_complexity, dtree_complexity, exact_degree,
    find_certificate, fractional_block_sensitivity, is_certificate, minimal_sensitive_blocks, sensitivity,
    MeasureReport,
};
use querybench::numopt::rat;

fn int(r: &MeasureReport) -> u64 {
    r.exact.as_ref().and_then(|e| e.to_integer().to_u64()).expect("integer measure")
}

fn value(table: u64, x: u64) -> bool {
    table >> x & 1 == 1
}

// Truth-table index x has bit (n-1-i) equal to position i, so flipping
// position i toggles bit n-1-i.
fn pos_bit(n: usize, i: usize) -> u64 {
    1 << (n - 1 - i)
}

fn block_bits(n: usize, mask: u64) -> u64 {
    (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| pos_bit(n, i)).sum()
}

fn oracle_sensitivity(n: usize, table: u64) -> u64 {
    (0..1u64 << n)
        .map(|x| (0..n).filter(|&i| value(table, x ^ pos_bit(n, i)) != value(table, x)).count() as u64)
        .max()
        .unwrap()
}

fn oracle_block_sensitivity(n: usize, table: u64) -> u64 {
    fn pack(blocks: &[u64], used: u64) -> u64 {
        blocks.iter().filter(|&&b| b & used == 0).map(|&b| 1 + pack(blocks, used | b)).max().unwrap_or(0)
    }
    (0..1u64 << n)
        .map(|x| {
            let blocks: Vec<u64> =
                (1..1u64 << n).filter(|&m| value(table, x ^ block_bits(n, m)) != value(table, x)).collect();
            pack(&blocks, 0)
        })
        .max()
        .unwrap()
}

fn oracle_certificate(n: usize, table: u64) -> u64 {
    (0..1u64 << n)
        .map(|x| {
            (0..1u64 << n)
                .filter(|&fixed| {
                    let free: Vec<u64> = (0..n).filter(|&i| fixed >> i & 1 == 0).map(|i| pos_bit(n, i)).collect();
                    (0..1u64 << free.len()).all(|pick| {
                        let flip: u64 = free.iter().enumerate().filter(|(k, _)| pick >> k & 1 == 1).map(|(_, b)| b).sum();
                        value(table, x ^ flip) == value(table, x)
                    })
                })
                .map(|m| m.count_ones() as u64)
                .min()
                .unwrap()
        })
        .max()
        .unwrap()
}

/// Minimax over restrictions, on the truth table restricted to `fixed` positions.
fn oracle_dtree(n: usize, table: u64) -> u64 {
    fn go(n: usize, table: u64, fixed: u64, vals: u64) -> u64 {
        let consistent: Vec<bool> = (0..1u64 << n)
            .filter(|&x| (0..n).all(|i| fixed >> i & 1 == 0 || ((x & pos_bit(n, i) != 0) == (vals >> i & 1 == 1))))
            .map(|x| value(table, x))
            .collect();
        if consistent.iter().all(|&v| v == consistent[0]) {
            return 0;
        }
        (0..n)
            .filter(|&i| fixed >> i & 1 == 0)
            .map(|i| 1 + go(n, table, fixed | 1 << i, vals).max(go(n, table, fixed | 1 << i, vals | 1 << i)))
            .min()
            .unwrap()
    }
    go(n, table, 0, 0)
}

/// Largest monomial with a nonzero Möbius coefficient.
fn oracle_degree(n: usize, table: u64) -> u64 {
    let mut best = 0;
    for s in 0..1u64 << n {
        let mut c = 0i64;
        for t in 0..1u64 << n {
            if t & !s == 0 {
                let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 { 1 } else { -1 };
                c += sign * value(table, block_bits(n, t)) as i64;
            }
        }
        if c != 0 {
            best = best.max(s.count_ones() as u64);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classical_measures_match_brute_force(n in 1usize..5, raw in any::<u64>()) {
        let table = raw & ((1u64 << (1 << n)) - 1);
        let f = PartialFunction::from_truth_table(n, table).unwrap();
        prop_assert_eq!(int(&sensitivity(&f).unwrap()), oracle_sensitivity(n, table));
        prop_assert_eq!(int(&block_sensitivity(&f).unwrap()), oracle_block_sensitivity(n, table));
        prop_assert_eq!(int(&certificate_complexity(&f)), oracle_certificate(n, table));
        prop_assert_eq!(int(&dtree_complexity(&f)), oracle_dtree(n, table));
        prop_assert_eq!(int(&exact_degree(&f).unwrap()), oracle_degree(n, table));
    }

    #[test]
    fn fbs_sits_between_bs_and_c(n in 1usize..5, raw in any::<u64>()) {
        let table = raw & ((1u64 << (1 << n)) - 1);
        let f = PartialFunction::from_truth_table(n, table).unwrap();
        let fbs = fractional_block_sensitivity(&f).unwrap().exact.unwrap();
        prop_assert!(block_sensitivity(&f).unwrap().exact.unwrap() <= fbs);
        prop_assert!(fbs <= certificate_complexity(&f).exact.unwrap());
    }

    #[test]
    fn approximate_degree_formulations_agree(n in 1usize..4, raw in any::<u64>()) {
        let table = raw & ((1u64 << (1 << n)) - 1);
        let f = PartialFunction::from_truth_table(n, table).unwrap();
        let third = rat(1, 3);
        let a = approx_degree(&f, &third).unwrap().exact.unwrap();
        let b = approx_degree_fourier(&f, &third).unwrap().exact.unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a <= exact_degree(&f).unwrap().exact.unwrap());
    }

    #[test]
    fn certificates_meet_every_minimal_block(n in 1usize..6, raw in any::<u64>(), xi in any::<u64>()) {
        let table = raw & ((1u64 << (1 << n)) - 1);
        let f = PartialFunction::from_truth_table(n, table).unwrap();
        let x = f.decode(xi % (1 << n));
        let cert = find_certificate(&f, &x).unwrap();
        prop_assert!(is_certificate(&f, &cert).unwrap());
        prop_assert!(cert.is_consistent_with(&x));
        let s = int(&sensitivity(&f).unwrap()) as u32;
        for m in minimal_sensitive_blocks(&f, &x).unwrap().masks() {
            prop_assert!(m & cert.support_mask() != 0);
            prop_assert!(m.count_ones() <= s);
        }
    }
}

#[test]
fn sabotage_domain_size_of_or_and_and() {
    // A sabotaged input fixes the non-star positions to a common subcube
    // containing both a 0-input and a 1-input, then uses * or † everywhere else.
    for n in 1..=4usize {
        let expected: usize = (1..=n).map(|k| binomial(n, k) * 2).sum();
        assert_eq!(sabotage(&PartialFunction::or(n)).unwrap().domain_size(), expected);
        assert_eq!(sabotage(&PartialFunction::and(n)).unwrap().domain_size(), expected);
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn composed_and_has_product_measures() {
    let and2 = PartialFunction::and(2);
    let g = compose_full(&and2, &and2, DEFAULT_DOMAIN_CAP).unwrap();
    assert_eq!(g.n(), 4);
    assert_eq!(int(&dtree_complexity(&g)), 4);
    assert_eq!(int(&sensitivity(&g).unwrap()), 4);
    assert_eq!(int(&certificate_complexity(&g)), 4);
}
