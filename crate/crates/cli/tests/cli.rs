use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_querybench"))
        .args(args)
        .env_remove("QUERYBENCH_CATALOG")
        .env_remove("QUERYBENCH_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn result<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["results"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap_or_else(|| panic!("{name}"))
}

/// The report without timing or cache flags.
fn body(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_clock_seconds");
    for r in v["results"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("cache_hit");
    }
    v
}

#[test]
fn or4_measures_with_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = ["measures", "--fn", "OR4", "--measure", "D,C,s,bs,fbs,adeg,adv", "--cache", cache.to_str().unwrap()];
    let cold = run(&args);
    assert!(cold.status.success(), "{}", String::from_utf8_lossy(&cold.stderr));
    let cold = json(&cold);
    for m in ["D", "C", "s", "bs", "fbs"] {
        assert_eq!(result(&cold, m)["value"], "4/1", "{m}");
    }
    let adv: f64 = result(&cold, "adv")["value"].as_str().unwrap().parse().unwrap();
    assert!((adv - 2.0).abs() <= 1e-4);
    assert!(cold["results"].as_array().unwrap().iter().all(|r| r["cache_hit"] == false));

    let warm = json(&run(&args));
    assert!(warm["results"].as_array().unwrap().iter().all(|r| r["cache_hit"] == true));
    assert_eq!(body(cold), body(warm));
}

#[test]
fn unknown_names_are_errors() {
    let out = run(&["measures", "--fn", "OR4", "--measure", "Q"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("UnknownMeasure") && msg.contains("fbs"), "{msg}");
    let out = run(&["measures", "--fn", "NOPE", "--measure", "D"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownFunction"));
    let out = run(&["verify", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownExperiment"));
}

#[test]
fn single_hybrid_check() {
    let out = run(&["verify", "hybrid", "--alg", "grover4", "--x", "0000", "--block", "1"]);
    assert!(out.status.success());
    let r = json(&out);
    let mass: f64 = result(&r, "hybrid: mass")["value"].as_str().unwrap().parse().unwrap();
    assert!((mass - 0.25).abs() <= 1e-9);
    assert_eq!(r["pass"], true);
}

#[test]
fn chain_over_three_bits() {
    let out = run(&["verify", "chain", "--n", "3", "--exhaustive"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(result(&json(&out), "chain: functions")["value"], 256);
}

#[test]
fn verify_reports_are_deterministic() {
    let a = run(&["verify", "cert-finder", "--seed", "7"]);
    let b = run(&["verify", "cert-finder", "--seed", "7"]);
    assert!(a.status.success());
    let a = json(&a);
    let rate: f64 = result(&a, "cert-finder: success rate >= 0.9")["value"].as_str().unwrap().parse().unwrap();
    assert!(rate >= 0.9);
    assert_eq!(body(a), body(json(&b)));
}

#[test]
fn failing_checks_set_the_exit_code() {
    // The full hybrid suite includes the literal tightness claim, which does not hold.
    let out = run(&["verify", "hybrid"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn compose_and_catalog_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("my.cat");
    let cat = cat.to_str().unwrap();
    let out = run(&["compose", "--catalog", cat, "IND", "1", "ID1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["n"], 3);
    let out = run(&["compose", "--catalog", cat, "SAB", "AND2"]);
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["q"].as_u64(), v["domain_size"].as_u64()), (Some(2), Some(4), Some(6)));
    let out = run(&["compose", "--catalog", cat, "IND", "5", "OR4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ArityOverflow"));

    let listing = dir.path().join("eq.txt");
    std::fs::write(&listing, "00 1\n11 1\n01 0\n").unwrap();
    let out = run(&["catalog", "add", "--catalog", cat, "EQ", "--listing", listing.to_str().unwrap(), "--n", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["catalog", "add", "--catalog", cat, "MAJ5", "MAJ", "5"]);
    assert!(out.status.success());

    let list = String::from_utf8(run(&["catalog", "list", "--catalog", cat]).stdout).unwrap();
    for name in ["IND1_ID1", "SAB_AND2", "EQ", "MAJ5", "OR4"] {
        assert!(list.lines().any(|l| l.starts_with(name)), "{name} missing from\n{list}");
    }
    let out = run(&["measures", "--catalog", cat, "--fn", "EQ", "--measure", "D,s"]);
    let v = json(&out);
    assert_eq!(result(&v, "D")["value"], "2/1");
    assert_eq!(v["functions"][0]["domain_size"], 3);
}

#[test]
fn sweeps_fan_out_over_workers() {
    let out = Command::new(env!("CARGO_BIN_EXE_querybench"))
        .args(["measures", "--fn", "all", "--measure", "s,deg"])
        .env("QUERYBENCH_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["functions"].as_array().unwrap().len() >= 10);
    assert_eq!(v["pass"], true);
    // UOR4 is partial, and deg is only defined for total functions.
    let uor = v["results"].as_array().unwrap().iter().find(|r| r["function"] == "UOR4" && r["name"] == "deg").unwrap();
    assert_eq!(uor["provenance"], "not applicable");
}
