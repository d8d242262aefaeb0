//! The verification experiments behind the acceptance suite and the CLI's
//! `verify` command. Each returns a report of named findings; checked
//! findings carry a pass flag and the report passes when all of them do.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::ser::{Serialize, Serializer};

use crate::boolfn::{
    compose_full, format_word, sabotage, Block, Letter, PartialFunction, DEFAULT_DOMAIN_CAP,
};
use crate::constructions::library::{
    complement_example, grover4, hybrid_suite, named_algorithm, read_all_sab_tree, read_both_tree,
    read_first_tree, read_pair_tree,
};
use crate::constructions::{
    certificate_finder_p, check_qszk, collision_distinguisher, distinguisher_outputs, q_to_qszk,
    qszk_complement, qszk_to_qd, rd_to_rs_transform, repetitions, rs_to_rd_transform,
    verify_distinguisher, zero_error_wrapper, ComplementWitness, ConstructionError,
    RandomizedAlgorithm, DEFAULT_THRESHOLD,
};
use crate::measures::{
    adv, approx_degree, approximable, check_chain, find_certificate, fractional_block_sensitivity,
    is_certificate, minimal_sensitive_blocks, sensitivity,
};
use crate::numopt::{rat, witness_value, Rational, SdpAdversaryInstance, SignMode};
use crate::qsim::{hybrid_check, trace_distance, trace_distance_pure, DensityState, QueryAlgorithm, StateVector};

/// Experiment names accepted by [`run_named`].
pub const EXPERIMENTS: &[&str] = &[
    "hybrid",
    "trace-identity",
    "collision",
    "chain",
    "adversary",
    "adeg-parity",
    "qszk-product",
    "qszk-complement",
    "cert-finder",
    "zero-error",
    "sabotage",
    "rdrs",
    "blocks",
];

/// Slack used by every floating-point check below.
pub const NUMERIC_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Exact(Rational),
    Text(String),
}

/// Reals with 17 significant digits, so values round-trip.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// `p/q`, keeping a denominator of 1.
pub fn format_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(v) => write!(f, "{v}"),
            Self::Real(v) => write!(f, "{}", format_real(*v)),
            Self::Exact(r) => write!(f, "{r}"),
            Self::Text(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Int(v) => s.serialize_i64(*v),
            Self::Exact(r) => s.serialize_str(&format_exact(r)),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Self::Real(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

impl From<Rational> for Value {
    fn from(v: Rational) -> Self {
        Self::Exact(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Self::Text(v.into())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Finding {
    pub name: String,
    pub value: Value,
    /// `None` for values that are reported but not checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub findings: Vec<Finding>,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.into(), findings: Vec::new() }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.findings.push(Finding { name: name.into(), value: value.into(), pass: None });
    }

    pub fn check(&mut self, name: impl Into<String>, value: impl Into<Value>, pass: bool) {
        self.findings.push(Finding { name: name.into(), value: value.into(), pass: Some(pass) });
    }

    pub fn pass(&self) -> bool {
        self.findings.iter().all(|f| f.pass != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.pass == Some(false))
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.findings.iter().find(|f| f.name == name).map(|f| &f.value)
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.experiment, if self.pass() { "pass" } else { "FAIL" })?;
        for x in &self.findings {
            let tag = match x.pass {
                Some(true) => " [pass]",
                Some(false) => " [FAIL]",
                None => "",
            };
            writeln!(f, "  {} = {}{tag}", x.name, x.value)?;
        }
        Ok(())
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= NUMERIC_SLACK
}

/// Hybrid check for one algorithm, input and block.
pub fn hybrid_single(
    alg: &QueryAlgorithm,
    x: &[Letter],
    block: &Block,
) -> Result<ExperimentReport, ConstructionError> {
    let r = hybrid_check(alg, x, block)?;
    let mut rep = ExperimentReport::new("hybrid");
    rep.metric("x", format_word(x, 2));
    rep.metric("block", block_text(block));
    rep.metric("mass", r.mass);
    rep.metric("bound", r.bound);
    rep.metric("footnote_bound", r.footnote_bound);
    rep.metric("epsilon", r.epsilon);
    rep.metric("distance", r.distance);
    rep.check("mass >= bound - 1e-9", r.mass - r.bound, r.pass);
    rep.check("step bounds", r.steps.len(), r.steps_pass());
    Ok(rep)
}

fn block_text(b: &Block) -> String {
    let items: Vec<String> = b.positions().iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Every case of the construction suite, plus the tightness claim for
/// exact search on `0000` with block `{1}`: mass = bound = 1/4.
pub fn hybrid_suite_report() -> Result<ExperimentReport, ConstructionError> {
    let cases = hybrid_suite()?;
    let mut rep = ExperimentReport::new("hybrid");
    rep.check("cases", cases.len(), cases.len() >= 20);
    let mut failed = Vec::new();
    let mut min_slack = f64::INFINITY;
    for c in &cases {
        let r = hybrid_check(&c.algorithm, &c.x, &c.block)?;
        min_slack = min_slack.min(r.mass - r.bound);
        if !(r.pass && r.steps_pass()) {
            failed.push(format!("{} {} {}", c.label, format_word(&c.x, 2), block_text(&c.block)));
        }
    }
    rep.metric("min mass - bound", min_slack);
    rep.check("all cases pass", failed.join("; "), failed.is_empty());
    let g = hybrid_check(&grover4(), &[0, 0, 0, 0], &Block::new([0], 4)?)?;
    rep.metric("grover4 0000 {1} distance", g.distance);
    rep.metric("grover4 0000 {1} epsilon", g.epsilon);
    rep.metric("grover4 0000 {1} footnote_bound", g.footnote_bound);
    rep.check("grover4 0000 {1} mass = 1/4", g.mass, near(g.mass, 0.25));
    rep.check("grover4 0000 {1} bound = 1/4", g.bound, near(g.bound, 0.25));
    Ok(rep)
}

fn random_state(d: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let v = StateVector::from_fn(d, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// The overlap formula against the eigenvalue path on random pure pairs of
/// dimension 2 to 16.
pub fn trace_identity(samples: usize, seed: u64) -> Result<ExperimentReport, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let d = rng.gen_range(2..=16);
        let a = random_state(d, &mut rng);
        let b = random_state(d, &mut rng);
        let pure = trace_distance_pure(&a, &b)?;
        let mixed = trace_distance(&DensityState::from_pure(&a), &DensityState::from_pure(&b))?;
        worst = worst.max((pure - mixed).abs());
    }
    let mut rep = ExperimentReport::new("trace-identity");
    rep.metric("samples", samples);
    rep.check("max |difference|", worst, samples > 0 && worst <= NUMERIC_SLACK);
    Ok(rep)
}

/// Exhaustive cross distances of the collision distinguisher.
pub fn collision(n: usize) -> Result<ExperimentReport, ConstructionError> {
    let alg = collision_distinguisher(n)?;
    let f = PartialFunction::collision(n)?;
    let out = distinguisher_outputs(&alg, &f)?;
    let v = verify_distinguisher(&out, &f, DEFAULT_THRESHOLD)?;
    let target = 0.75f64.sqrt();
    let mut rep = ExperimentReport::new("collision");
    rep.metric("n", n);
    rep.metric("one-to-one inputs", f.inputs_with_value(false).count());
    rep.metric("two-to-one inputs", f.inputs_with_value(true).count());
    rep.check("queries", alg.queries(), alg.queries() == 1);
    rep.check(
        "min cross distance >= sqrt(3)/2",
        v.min_cross_distance,
        v.min_cross_distance >= target - NUMERIC_SLACK,
    );
    Ok(rep)
}

/// All total functions on `n` bits when `exhaustive`, then `random` seeded
/// random total functions on `random_n` bits.
pub fn chain_functions(n: usize, exhaustive: bool, random_n: usize, random: usize, seed: u64) -> Vec<PartialFunction> {
    let mut out = Vec::new();
    if exhaustive {
        for table in 0..1u64 << (1 << n) {
            out.push(PartialFunction::from_truth_table(n, table).expect("n <= 6").with_name(format!("T{n}_{table:x}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = 1u32 << random_n;
    for _ in 0..random {
        let table = rng.gen::<u64>() & if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        out.push(PartialFunction::from_truth_table(random_n, table).expect("n <= 6").with_name(format!("T{random_n}_{table:x}")));
    }
    out
}

/// The measure chain on each function.
pub fn chain(functions: &[PartialFunction], tol: f64) -> Result<ExperimentReport, ConstructionError> {
    let mut failures = Vec::new();
    for f in functions {
        match check_chain(f, tol) {
            Ok(r) if r.pass() => {}
            Ok(r) => {
                let rels: Vec<&str> = r.failures().map(|c| c.relation.as_str()).collect();
                failures.push(format!("{}: {}", f.label(), rels.join(", ")));
            }
            Err(e) => failures.push(format!("{}: {e}", f.label())),
        }
    }
    let mut rep = ExperimentReport::new("chain");
    rep.metric("functions", functions.len());
    rep.metric("tolerance", tol);
    rep.check("failures", failures.len(), failures.is_empty());
    if !failures.is_empty() {
        rep.metric("first failures", failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "));
    }
    Ok(rep)
}

/// `adv(OR_n) = √n` for `n = 2, 3, 4`, with the closed-form witness
/// (`Γ[0^n, e_i] = 1`) attaining `√n`, and `adv(AND₂∘AND₂) = 2`.
pub fn adversary(tol: f64) -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("adversary");
    for n in 2..=4usize {
        let f = PartialFunction::or(n);
        let r = adv(&f, tol)?;
        let root = (n as f64).sqrt();
        rep.check(format!("adv(OR{n}) - sqrt({n})"), r.value - root, (r.value - root).abs() <= 1e-4);
        rep.check(
            format!("adv(OR{n}) certified bracket"),
            format!("[{}, {}]", format_real(r.lower), format_real(r.upper)),
            r.lower <= root + 1e-4 && r.upper >= root - 1e-4 && r.upper - r.lower <= 2.0 * tol,
        );
        let inst = SdpAdversaryInstance::from_function(&f, SignMode::Nonnegative)
            .map_err(crate::measures::MeasureError::from)?;
        let zero = inst.zeros.iter().position(|x| x.iter().all(|&b| b == 0)).expect("OR has 0^n");
        let gamma = DMatrix::from_fn(inst.zeros.len(), inst.ones.len(), |a, b| {
            let y = &inst.ones[b];
            if a == zero && y.iter().filter(|&&v| v == 1).count() == 1 { 1.0 } else { 0.0 }
        });
        let w = witness_value(&inst, &gamma);
        rep.check(format!("witness(OR{n})"), w, (w - root).abs() <= NUMERIC_SLACK);
    }
    let and2 = PartialFunction::and(2);
    let comp = compose_full(&and2, &and2, DEFAULT_DOMAIN_CAP)?;
    let r = adv(&comp, tol)?;
    rep.check("adv(AND2∘AND2) - 2", r.value - 2.0, (r.value - 2.0).abs() <= 1e-3);
    Ok(rep)
}

/// `adeg(PARITY_n) = n` at error 1/3: infeasible at `n - 1`, feasible at `n`.
pub fn adeg_parity(max_n: usize) -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("adeg-parity");
    let third = rat(1, 3);
    for n in 1..=max_n {
        let f = PartialFunction::parity(n);
        let below = approximable(&f, n - 1, &third);
        let at = approximable(&f, n, &third);
        let d = approx_degree(&f, &third)?;
        let exact = d.exact.clone().unwrap_or_else(|| rat(-1, 1));
        rep.check(format!("PARITY{n}: degree {} infeasible", n - 1), (!below).to_string(), !below);
        rep.check(format!("PARITY{n}: degree {n} feasible"), at.to_string(), at);
        rep.check(format!("adeg(PARITY{n})"), exact.clone(), exact == rat(n as i64, 1));
    }
    Ok(rep)
}

const QSZK_SUITE: &[(&str, bool)] = &[
    ("deutsch", true),
    ("and2", true),
    ("grover4-half", true),
    ("rotation", false),
    ("grover4-or", false),
];

/// Pairs from bounded-error algorithms: the pair clauses, exact 0/1
/// distances for the exact algorithms, and the tensor-product distinguisher
/// at threshold 1/6 with its max-of-factors step.
pub fn qszk_product() -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("qszk-product");
    for &(name, exact) in QSZK_SUITE {
        let (alg, f) = named_algorithm(name).expect("library name");
        let pair = q_to_qszk(&alg, &f)?;
        let check = check_qszk(&pair, &f)?;
        rep.check(
            format!("{name}: clauses 2/3 and 1/3"),
            format!("far {} close {}", format_real(check.far_min), format_real(check.close_max)),
            check.pass(),
        );
        if exact {
            let ok = pair.distances()?.iter().all(|(x, d)| {
                let v = f.evaluate(x).expect("domain input");
                near(*d, if v { 1.0 } else { 0.0 })
            });
            rep.check(format!("{name}: distances exactly 1 and 0"), ok.to_string(), ok);
        }
        let qd = qszk_to_qd(&pair, &f)?;
        let v = verify_distinguisher(&qd, &f, 1.0 / 6.0)?;
        rep.check(format!("{name}: product min cross distance"), v.min_cross_distance, v.pass);
        let mut step_min = f64::INFINITY;
        for (x, vx) in f.entries().filter(|e| e.1) {
            for (y, _) in f.entries().filter(|e| !e.1 && vx) {
                let (rx, sx) = pair.get(&x).expect("covered");
                let (ry, sy) = pair.get(&y).expect("covered");
                step_min = step_min.min(trace_distance(rx, ry)?.max(trace_distance(sx, sy)?));
            }
        }
        rep.check(format!("{name}: max of factor distances"), step_min, step_min >= 1.0 / 6.0 - 1e-12);
    }
    Ok(rep)
}

/// The complement construction on its ideal example.
pub fn qszk_complement_report() -> Result<ExperimentReport, ConstructionError> {
    let input = complement_example();
    let f = PartialFunction::identity();
    let (pair, witnesses) = qszk_complement(&input, &f)?;
    let mut rep = ExperimentReport::new("qszk-complement");
    for (x, d) in pair.distances()? {
        let equal_inputs = !f.evaluate(&x)?;
        let (label, target) = if equal_inputs { ("equal pair", 0.5) } else { ("orthogonal pair", 0.0) };
        rep.check(format!("x = {}: {label} output distance", format_word(&x, 2)), d, near(d, target));
    }
    for (x, w) in &witnesses {
        let kind = match w {
            ComplementWitness::Swap { a_states, .. } => {
                let plus = DensityState::from_pure(&StateVector::from_element(2, Complex64::new(0.5f64.sqrt(), 0.0)));
                let ok = trace_distance(&a_states.0, &plus)? <= NUMERIC_SLACK
                    && trace_distance(&a_states.1, &DensityState::maximally_mixed(2))? <= NUMERIC_SLACK;
                rep.check(format!("x = {}: register A is |+⟩ vs I/2", format_word(x, 2)), ok.to_string(), ok);
                "swap"
            }
            ComplementWitness::Writer { .. } => "writer",
        };
        rep.check(format!("x = {}: {kind} unitary residual", format_word(x, 2)), w.residual(), w.residual() <= NUMERIC_SLACK);
    }
    Ok(rep)
}

/// The repetition count for `f` with a `queries`-query distinguisher.
fn repetition_count(f: &PartialFunction, queries: usize) -> Result<u64, ConstructionError> {
    let s = sensitivity(f)?.exact.and_then(|r| r.to_integer().to_u64()).expect("integer sensitivity");
    let fbs = fractional_block_sensitivity(f)?.exact.expect("exact fbs");
    Ok(repetitions(queries, s, &fbs))
}

/// One run of the certificate finder per seed and unique-marked-OR input,
/// with exact search as the distinguisher.
pub fn cert_finder(seeds: u64, base_seed: u64) -> Result<ExperimentReport, ConstructionError> {
    let alg = grover4();
    let f = PartialFunction::unique_marked_or(4);
    let mut rep = ExperimentReport::new("cert-finder");
    let v = verify_distinguisher(&distinguisher_outputs(&alg, &f)?, &f, DEFAULT_THRESHOLD)?;
    rep.check("distinguisher min cross distance", v.min_cross_distance, v.pass);
    let reps = repetition_count(&f, alg.queries())?;
    rep.metric("repetitions", reps as usize);
    let mut hits = 0usize;
    let mut total = 0usize;
    for seed in 0..seeds {
        for x in f.domain() {
            let run = certificate_finder_p(&alg, &f, &x, reps, base_seed.wrapping_add(seed))?;
            hits += run.is_cert as usize;
            total += 1;
        }
    }
    let rate = hits as f64 / total.max(1) as f64;
    rep.metric("runs", total);
    rep.check("success rate >= 0.9", rate, rate >= 0.9);
    Ok(rep)
}

/// The zero-error wrapper on every seed and unique-marked-OR input.
pub fn zero_error(seeds: u64, base_seed: u64, max_batches: usize) -> Result<ExperimentReport, ConstructionError> {
    let alg = grover4();
    let f = PartialFunction::unique_marked_or(4);
    let reps = repetition_count(&f, alg.queries())?;
    let mut rep = ExperimentReport::new("zero-error");
    rep.metric("repetitions", reps as usize);
    let (mut wrong, mut uncertified, mut first_batch, mut batches, mut total) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for seed in 0..seeds {
        for (x, v) in f.entries() {
            let run = zero_error_wrapper(&alg, &f, &x, base_seed.wrapping_add(seed), reps, max_batches)?;
            wrong += (run.value != v) as usize;
            uncertified += (!is_certificate(&f, &run.certificate)? || !run.certificate.is_consistent_with(&x)) as usize;
            first_batch += (run.batches_used <= 1) as usize;
            batches += run.batches_used;
            total += 1;
        }
    }
    rep.metric("runs", total);
    rep.check("wrong values", wrong, wrong == 0);
    rep.check("non-certificates", uncertified, uncertified == 0);
    let rate = first_batch as f64 / total.max(1) as f64;
    rep.check("batch-1 success rate >= 0.9", rate, rate >= 0.9);
    let mean = batches as f64 / total.max(1) as f64;
    rep.check("mean batches <= 2", mean, mean <= 2.0);
    Ok(rep)
}

/// `f_sab(AND₂)` and `f_sab(OR₂)`: six inputs each, with the expected `S_*`.
pub fn sabotage_report() -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("sabotage");
    for (f, expected) in [
        (PartialFunction::and(2), ["1*", "*1", "**"]),
        (PartialFunction::or(2), ["0*", "*0", "**"]),
    ] {
        let g = sabotage(&f)?;
        rep.check(format!("|Dom({})|", g.label()), g.domain_size(), g.domain_size() == 6);
        let stars: BTreeSet<String> = g.inputs_with_value(false).map(|z| format_word(&z, 4)).collect();
        let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        let listed = stars.iter().cloned().collect::<Vec<_>>().join(" ");
        rep.check(format!("S_* of {}", f.label()), listed, stars == want);
    }
    Ok(rep)
}

/// Both classical directions on AND₂ and OR₂.
pub fn rdrs() -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("rdrs");
    let sixth = rat(1, 6);
    let twelfth = rat(1, 12);
    for f in [PartialFunction::and(2), PartialFunction::or(2)] {
        let name = f.label().to_string();
        let a = RandomizedAlgorithm::deterministic(read_all_sab_tree(2));
        let cost = crate::constructions::expected_cost(&a, &sabotage(&f)?)?;
        let budget = (&cost * rat(2, 1)).ceil().to_integer().to_usize().expect("small budget");
        let rd = rs_to_rd_transform(&a, &f, budget)?;
        rep.metric(format!("{name}: read-all cost"), cost);
        rep.check(format!("{name}: min cross TV >= 1/6"), rd.min_cross_tv.clone(), rd.min_cross_tv >= sixth);
        let valid: Vec<(&str, Result<crate::constructions::HitReport, ConstructionError>)> = vec![
            ("transformed", rd_to_rs_transform(&rd.algorithm, &f)),
            ("read-both", rd_to_rs_transform(&RandomizedAlgorithm::deterministic(read_both_tree()), &f)),
            (
                "random order",
                rd_to_rs_transform(
                    &RandomizedAlgorithm::new(vec![
                        (rat(1, 2), read_pair_tree(0, 1)),
                        (rat(1, 2), read_pair_tree(1, 0)),
                    ])?,
                    &f,
                ),
            ),
        ];
        for (label, hit) in valid {
            let hit = hit?;
            rep.check(
                format!("{name}: {label} hit probability >= 1/12"),
                hit.hit_prob_per_run.clone(),
                hit.hit_prob_per_run >= twelfth,
            );
        }
        let bad = rd_to_rs_transform(&RandomizedAlgorithm::deterministic(read_first_tree()), &f);
        let rejected = matches!(bad, Err(ConstructionError::DistinguishingPromiseViolated { .. }));
        rep.check(format!("{name}: single-position reader rejected"), rejected.to_string(), rejected);
    }
    Ok(rep)
}

/// Minimal sensitive blocks of every total function on `1..=max_n` bits:
/// size at most `s(f)`, agreement with brute force over all blocks, and
/// every certificate meets every minimal block.
pub fn blocks(max_n: usize) -> Result<ExperimentReport, ConstructionError> {
    let mut rep = ExperimentReport::new("blocks");
    let (mut functions, mut too_big, mut mismatched, mut missed) = (0usize, 0usize, 0usize, 0usize);
    for n in 1..=max_n {
        let full = 1u64 << n;
        for table in 0..1u64 << full {
            let f = PartialFunction::from_truth_table(n, table)?;
            functions += 1;
            let s = sensitivity(&f)?.exact.and_then(|r| r.to_integer().to_u64()).expect("integer");
            let value = |c: u64| table >> c & 1 == 1;
            for x in f.domain() {
                let code = f.encode(&x)?;
                let found = minimal_sensitive_blocks(&f, &x)?.masks();
                too_big += found.iter().filter(|m| m.count_ones() as u64 > s).count();
                // Brute force: bit i of a mask is position i; flip_code maps it to the input.
                let sensitive = |m: u64| value(f.flip_code(code, m)) != value(code);
                let brute: BTreeSet<u64> = (1..full)
                    .filter(|&m| sensitive(m) && !(1..m).any(|sub| sub & m == sub && sensitive(sub)))
                    .collect();
                mismatched += (found.iter().copied().collect::<BTreeSet<u64>>() != brute) as usize;
                let cert = find_certificate(&f, &x)?.support_mask();
                missed += found.iter().filter(|&&m| m & cert == 0).count();
            }
        }
    }
    rep.metric("functions", functions);
    rep.check("blocks larger than s(f)", too_big, too_big == 0);
    rep.check("inputs where enumeration differs from brute force", mismatched, mismatched == 0);
    rep.check("blocks missed by a certificate", missed, missed == 0);
    Ok(rep)
}

/// Runs an experiment by name with its default parameters.
pub fn run_named(name: &str, seed: u64) -> Option<Result<ExperimentReport, ConstructionError>> {
    Some(match name {
        "hybrid" => hybrid_suite_report(),
        "trace-identity" => trace_identity(500, seed),
        "collision" => collision(4),
        "chain" => chain(&chain_functions(3, true, 4, 200, seed), 1e-4),
        "adversary" => adversary(1e-4),
        "adeg-parity" => adeg_parity(4),
        "qszk-product" => qszk_product(),
        "qszk-complement" => qszk_complement_report(),
        "cert-finder" => cert_finder(100, seed),
        "zero-error" => zero_error(100, seed, 64),
        "sabotage" => sabotage_report(),
        "rdrs" => rdrs(),
        "blocks" => blocks(4),
        _ => return None,
    })
}
