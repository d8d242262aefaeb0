use num_traits::Zero;
use proptest::prelude::*;

use querybench::boolfn::{sabotage, Letter, PartialFunction};
use querybench::constructions::library::{
    grover4, random_algorithm, read_all_sab_tree, read_both_tree, rotation_identity,
};
use querybench::constructions::{
    check_qszk, collision_distinguisher, distinguisher_outputs, parse_randomized, parse_tree, q_to_qd, q_to_qszk,
    qszk_to_qd, rd_to_rs_transform, rs_to_rd_transform, run_tree, verify_distinguisher, zero_error_wrapper,
    DecisionTree, RandomizedAlgorithm,
};
use querybench::measures::is_certificate;
use querybench::numopt::rat;
use querybench::qsim::{parse_algorithm, trace_distance, write_algorithm, DEFAULT_DIM_CAP};

#[test]
fn bounded_error_distinguisher_meets_one_third() {
    // p = 2/3 on 1 and 1/3 on 0, the extreme allowed by bounded error.
    let f = PartialFunction::identity();
    let d = q_to_qd(&rotation_identity(), &f).unwrap();
    let v = verify_distinguisher(&d, &f, 1.0 / 3.0 - 1e-12).unwrap();
    assert!(v.pass);
    assert!((v.min_cross_distance - 1.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn state_pair_constants_at_the_boundary() {
    let f = PartialFunction::identity();
    let pair = q_to_qszk(&rotation_identity(), &f).unwrap();
    let check = check_qszk(&pair, &f).unwrap();
    assert!(check.pass());
    assert!((check.far_min - 2.0 / 3.0).abs() <= 1e-12);
    assert!((check.close_max - 1.0 / 3.0).abs() <= 1e-12);
    let qd = qszk_to_qd(&pair, &f).unwrap();
    let v = verify_distinguisher(&qd, &f, 1.0 / 6.0).unwrap();
    assert!(v.pass, "{}", v.min_cross_distance);
    // Triangle step: one of the two factors is at least 1/6 apart.
    let (r1, s1) = pair.get(&[1]).unwrap();
    let (r0, s0) = pair.get(&[0]).unwrap();
    let step = trace_distance(r1, r0).unwrap().max(trace_distance(s1, s0).unwrap());
    assert!(step >= 1.0 / 6.0);
}

#[test]
fn classical_constants() {
    let f = PartialFunction::and(2);
    let a = RandomizedAlgorithm::deterministic(read_all_sab_tree(2));
    let rd = rs_to_rd_transform(&a, &f, 4).unwrap();
    assert!(rd.min_cross_tv >= rat(1, 6));
    let hit = rd_to_rs_transform(&RandomizedAlgorithm::deterministic(read_both_tree()), &f).unwrap();
    assert!(hit.hit_prob_per_run >= rat(1, 12));
    assert_eq!(hit.expected_queries, rat(24, 1));
}

/// Every pair of functions `[4] → [4]`: the output overlap is the number of
/// agreements over 4, so the distance is `√(1 - (agree/4)²)`.
#[test]
fn collision_distances_match_agreement_counts() {
    let alg = collision_distinguisher(4).unwrap();
    let f = PartialFunction::collision(4).unwrap();
    let out = distinguisher_outputs(&alg, &f).unwrap();
    assert_eq!(out.queries(), 1);
    for (x, ox) in out.iter() {
        for (y, oy) in out.iter() {
            let agree = x.iter().zip(y.iter()).filter(|(a, b)| a == b).count() as f64;
            let oracle = (1.0 - (agree / 4.0).powi(2)).sqrt();
            assert!((ox.distance(oy).unwrap() - oracle).abs() <= 1e-9, "{x:?} {y:?}");
        }
    }
}

fn tree(n: usize, q: u8) -> impl Strategy<Value = DecisionTree<Letter>> {
    let leaf = (0..q).prop_map(DecisionTree::Leaf);
    leaf.prop_recursive(4, 32, q as u32, move |inner| {
        (0..n, prop::collection::vec(inner, q as usize))
            .prop_map(|(position, children)| DecisionTree::Query { position, children })
    })
}

proptest! {
    #[test]
    fn tree_text_round_trips(t in tree(3, 2)) {
        prop_assert_eq!(parse_tree(&t.to_text(), 3, 2).unwrap(), t);
    }

    #[test]
    fn quaternary_tree_text_round_trips(t in tree(2, 4)) {
        prop_assert_eq!(parse_tree(&t.to_text(), 2, 4).unwrap(), t);
    }

    #[test]
    fn randomized_text_round_trips(ts in prop::collection::vec(tree(3, 2), 1..4), w in prop::collection::vec(1i64..10, 3)) {
        let total: i64 = w[..ts.len()].iter().sum();
        let a = RandomizedAlgorithm::new(ts.into_iter().zip(&w).map(|(t, &k)| (rat(k, total), t)).collect()).unwrap();
        prop_assert_eq!(parse_randomized(&a.to_text(), 3, 2).unwrap(), a);
    }

    #[test]
    fn tree_runs_read_consistent_letters(t in tree(3, 2), bits in 0u8..8) {
        let x: Vec<Letter> = (0..3).map(|i| bits >> i & 1).collect();
        let (_, read) = run_tree(&t, &x).unwrap();
        prop_assert!(read.is_consistent_with(&x));
        prop_assert!(read.len() <= t.depth());
    }

    #[test]
    fn algorithm_files_round_trip(n in 1usize..4, w in 1usize..3, t in 0usize..3, seed in any::<u64>()) {
        let alg = random_algorithm(n, w, t, seed).unwrap();
        let back = parse_algorithm(&write_algorithm(&alg), DEFAULT_DIM_CAP).unwrap();
        prop_assert_eq!(back.queries(), alg.queries());
        for (a, b) in alg.steps().iter().zip(back.steps()) {
            prop_assert_eq!(&a.matrix, &b.matrix);
        }
    }

    /// Whenever the wrapper answers, the answer is right and backed by a certificate.
    #[test]
    fn zero_error_wrapper_is_sound(seed in any::<u64>(), reps in 1u64..40, j in 0usize..5) {
        let f = PartialFunction::unique_marked_or(4);
        let x = f.domain().nth(j).unwrap();
        if let Ok(run) = zero_error_wrapper(&grover4(), &f, &x, seed, reps, 8) {
            prop_assert_eq!(run.value, f.evaluate(&x).unwrap());
            prop_assert!(is_certificate(&f, &run.certificate).unwrap());
            prop_assert!(run.certificate.is_consistent_with(&x));
        }
    }
}

#[test]
fn sabotaged_inputs_need_a_star_read() {
    let f = PartialFunction::or(2);
    let g = sabotage(&f).unwrap();
    let a = RandomizedAlgorithm::deterministic(read_all_sab_tree(2));
    for (z, v) in g.entries() {
        let dist = a.output_distribution(&z).unwrap();
        assert_eq!(dist.len(), 1);
        assert!(dist.get(&(v as Letter)).is_some_and(|p| !p.is_zero()));
    }
}
