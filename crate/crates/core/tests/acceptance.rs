//! Acceptance suite: one pass/fail line per criterion, including its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use querybench::constructions::ConstructionError;
use querybench::experiments::{
    adeg_parity, adversary, blocks, chain, chain_functions, collision, hybrid_suite_report, qszk_complement_report,
    qszk_product, rdrs, sabotage_report, trace_identity, zero_error, ExperimentReport,
};

const SEED: u64 = 7;

type Run = fn() -> Result<Vec<ExperimentReport>, ConstructionError>;

fn one(r: Result<ExperimentReport, ConstructionError>) -> Result<Vec<ExperimentReport>, ConstructionError> {
    r.map(|r| vec![r])
}

fn criteria() -> Vec<(&'static str, u64, Run)> {
    vec![
        ("hybrid-argument suite", 5, || one(hybrid_suite_report())),
        ("pure-state trace distance identity", 1, || one(trace_identity(500, SEED))),
        ("collision distinguisher", 10, || one(collision(4))),
        ("measure chains", 600, || one(chain(&chain_functions(3, true, 4, 200, SEED), 1e-4))),
        ("adversary values", 120, || one(adversary(1e-4))),
        ("approximate degree of parity", 120, || one(adeg_parity(4))),
        ("state-distinguishability constructions", 30, || Ok(vec![qszk_product()?, qszk_complement_report()?])),
        ("zero-error wrapper", 60, || one(zero_error(100, SEED, 64))),
        ("sabotage and classical transforms", 10, || Ok(vec![sabotage_report()?, rdrs()?])),
        ("minimal sensitive blocks", 120, || one(blocks(4))),
    ]
}

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--verbose");
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match &result {
            Ok(reports) => {
                let fails: Vec<String> = reports
                    .iter()
                    .flat_map(|r| r.failures().map(move |f| format!("{}: {} = {}", r.experiment, f.name, f.value)))
                    .collect();
                (fails.is_empty(), fails.join("; "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let pass = ok && in_time;
        failed += !pass as usize;
        let mut line = format!(
            "criterion {:>2} {:<40} {} ({:.2}s, limit {limit}s)",
            k + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !in_time {
            line.push_str(" [over time limit]");
        }
        if !detail.is_empty() {
            line.push_str(&format!(" [{detail}]"));
        }
        println!("{line}");
        if verbose {
            if let Ok(reports) = &result {
                for r in reports {
                    print!("{r}");
                }
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
