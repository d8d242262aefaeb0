//! Versioned JSON reports. Field order is fixed by the struct definitions.

use querybench::boolfn::PartialFunction;
use querybench::experiments::{ExperimentReport, Value};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const REPORT_VERSION: u32 = 1;

/// SHA-256 over `n`, `q` and the sorted (code, value) listing.
pub fn content_hash(f: &PartialFunction) -> String {
    let mut h = Sha256::new();
    h.update(format!("n={};q={};", f.n(), f.q()));
    for (code, v) in f.codes() {
        h.update(format!("{code}:{};", *v as u8));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionId {
    pub name: String,
    pub n: usize,
    pub q: u8,
    pub domain_size: usize,
    pub hash: String,
}

impl FunctionId {
    pub fn of(name: &str, f: &PartialFunction) -> Self {
        Self { name: name.into(), n: f.n(), q: f.q(), domain_size: f.domain_size(), hash: content_hash(f) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_hit: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub functions: Vec<FunctionId>,
    pub results: Vec<Entry>,
    pub pass: bool,
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn new(command: Vec<String>, seed: Option<u64>) -> Self {
        Self { version: REPORT_VERSION, command, seed, functions: Vec::new(), results: Vec::new(), pass: true, wall_clock_seconds: 0.0 }
    }

    pub fn push(&mut self, e: Entry) {
        self.pass &= e.pass != Some(false);
        self.results.push(e);
    }

    pub fn add_experiment(&mut self, r: &ExperimentReport) {
        for f in &r.findings {
            self.push(Entry {
                function: None,
                name: format!("{}: {}", r.experiment, f.name),
                value: f.value.clone(),
                lower: None,
                upper: None,
                tolerance: None,
                provenance: format!("experiment {}", r.experiment),
                pass: f.pass,
                cache_hit: None,
            });
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
