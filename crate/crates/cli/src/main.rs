mod cache;
mod measures;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use querybench::boolfn::{
    parse_catalog, parse_word, BoolFnError, BuiltinSpec, Catalog, CatalogError, PartialFunction, DEFAULT_DOMAIN_CAP,
};
use querybench::constructions::library::{named_algorithm, ALGORITHM_NAMES};
use querybench::experiments::{self, Value, EXPERIMENTS};
use querybench::qsim::{parse_algorithm, QueryAlgorithm, DEFAULT_DIM_CAP};

use cache::MeasureCache;
use report::{Entry, FunctionId, Report};

const STANDARD_CATALOG: &str = include_str!("../catalog/standard.cat");

#[derive(Parser)]
#[command(name = "querybench", version, about = "Query-complexity measures and verification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CatalogArgs {
    /// Catalog file; the built-in standard catalog when omitted.
    #[arg(long, env = "QUERYBENCH_CATALOG")]
    catalog: Option<PathBuf>,
    /// Largest domain that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Computes measures of catalog functions.
    Measures {
        #[command(flatten)]
        catalog: CatalogArgs,
        /// Function name; repeat or use `all`.
        #[arg(long = "fn", required = true)]
        functions: Vec<String>,
        /// Comma-separated measures.
        #[arg(long, value_delimiter = ',', default_value = "D,C,s,bs,fbs,deg,adeg,adv")]
        measure: Vec<String>,
        #[arg(long, default_value_t = querybench::measures::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, env = "QUERYBENCH_CACHE")]
        cache: Option<PathBuf>,
        /// Worker threads for the sweep.
        #[arg(long, env = "QUERYBENCH_WORKERS")]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification experiment.
    Verify(VerifyArgs),
    /// Builds a function from a constructor and appends it to a catalog.
    Compose {
        #[arg(long, env = "QUERYBENCH_CATALOG")]
        catalog: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: usize,
        /// Catalog name; derived from the constructor when omitted.
        #[arg(long)]
        name: Option<String>,
        /// Constructor, e.g. `IND 1 ID1`, `UIND 2 OR2`, `SAB AND2`, `COMP AND2 AND2`.
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Lists or extends a catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    List {
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Adds a builtin record (`catalog add NAME OR 3`) or a listing file of
    /// `string bit` lines (`catalog add NAME --listing FILE --n 3 --q 2`).
    Add {
        #[arg(long, env = "QUERYBENCH_CATALOG")]
        catalog: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: usize,
        name: String,
        #[arg(num_args = 0..)]
        spec: Vec<String>,
        #[arg(long, conflicts_with = "spec")]
        listing: Option<PathBuf>,
        #[arg(long, requires = "listing")]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        q: u8,
    },
}

#[derive(Args)]
struct VerifyArgs {
    experiment: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Library algorithm for a single hybrid check.
    #[arg(long, conflicts_with = "alg_file")]
    alg: Option<String>,
    /// Algorithm file for a single hybrid check.
    #[arg(long)]
    alg_file: Option<PathBuf>,
    /// Input string for a single hybrid check.
    #[arg(long)]
    x: Option<String>,
    /// Comma-separated 1-based block positions.
    #[arg(long, value_delimiter = ',')]
    block: Vec<usize>,
    /// Input length for the chain sweep.
    #[arg(long)]
    n: Option<usize>,
    /// Enumerate every total function on `n` bits.
    #[arg(long)]
    exhaustive: bool,
    /// Number of random total functions in the chain sweep.
    #[arg(long)]
    random: Option<usize>,
    /// Length of the random chain functions.
    #[arg(long, default_value_t = 4)]
    random_n: usize,
    /// Repetitions for the Monte Carlo experiments.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    #[arg(long, default_value_t = 64)]
    max_batches: usize,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_catalog(path: Option<&Path>, cap: usize) -> Result<Catalog> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading catalog {}", p.display()))?,
        None => STANDARD_CATALOG.to_string(),
    };
    Ok(parse_catalog(&text, cap)?)
}

/// Loads a catalog that will be written back, seeding a missing file with
/// the standard catalog.
fn load_writable(path: &Path, cap: usize) -> Result<Catalog> {
    if path.exists() {
        load_catalog(Some(path), cap)
    } else {
        load_catalog(None, cap)
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let json = report.to_json();
    match out {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => write_stdout(&json)?,
    }
    Ok(())
}

/// Writes to stdout, treating a closed pipe as success.
fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn argv() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn describe(e: CatalogError) -> anyhow::Error {
    match e {
        CatalogError::Function { name, source: source @ BoolFnError::ArityOverflow { .. } } => {
            anyhow!("ArityOverflow: {name}: {source}")
        }
        CatalogError::UnknownFunction(name) => anyhow!("UnknownFunction: {name}"),
        other => other.into(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_measures(
    catalog: &CatalogArgs,
    names: &[String],
    measure_names: &[String],
    tol: f64,
    cache_path: Option<&Path>,
    workers: Option<usize>,
    out: Option<&Path>,
) -> Result<bool> {
    let start = Instant::now();
    measures::check_names(measure_names)?;
    let cat = load_catalog(catalog.catalog.as_deref(), catalog.cap)?;
    let selected: Vec<(String, &PartialFunction)> = if names.iter().any(|n| n == "all") {
        cat.entries().iter().map(|e| (e.name.clone(), &e.function)).collect()
    } else {
        names
            .iter()
            .map(|n| cat.get(n).map(|f| (n.clone(), f)).ok_or_else(|| anyhow!("UnknownFunction: {n}")))
            .collect::<Result<_>>()?
    };
    let mut cache = match cache_path {
        Some(p) => MeasureCache::open(p)?,
        None => MeasureCache::disabled(),
    };
    let ids: Vec<FunctionId> = selected.iter().map(|(n, f)| FunctionId::of(n, f)).collect();
    let jobs: Vec<(usize, &str, String)> = ids
        .iter()
        .enumerate()
        .flat_map(|(k, id)| {
            measure_names.iter().map(move |m| (k, m.as_str(), cache::key(&id.hash, m, &measures::params(m, tol))))
        })
        .collect();
    let missing: Vec<&(usize, &str, String)> = jobs.iter().filter(|(_, _, key)| cache.get(key).is_none()).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build()?;
    let computed: Vec<(String, std::result::Result<cache::CachedMeasure, (bool, String)>)> = pool.install(|| {
        missing
            .par_iter()
            .map(|(k, m, key)| {
                let r = measures::compute(selected[*k].1, m, tol);
                (key.clone(), r.map_err(|e| (measures::not_applicable(&e), e.to_string())))
            })
            .collect()
    });
    // Single writer: results go into the cache in job order.
    let mut fresh = std::collections::BTreeMap::new();
    for (key, r) in computed {
        if let Ok(m) = &r {
            cache.insert(key.clone(), m.clone());
        }
        fresh.insert(key, r);
    }
    cache.save()?;

    let mut report = Report::new(argv(), None);
    report.functions = ids.clone();
    for (k, m, key) in &jobs {
        let function = Some(ids[*k].name.clone());
        let entry = match (fresh.get(key), cache.get(key)) {
            (Some(Err((na, e))), _) => Entry {
                function,
                name: m.to_string(),
                value: Value::Text(if *na { format!("not applicable: {e}") } else { format!("error: {e}") }),
                lower: None,
                upper: None,
                tolerance: None,
                provenance: if *na { "not applicable" } else { "error" }.into(),
                pass: if *na { None } else { Some(false) },
                cache_hit: Some(false),
            },
            (hit, Some(c)) => Entry {
                function,
                name: m.to_string(),
                value: Value::Text(c.value.clone()),
                lower: Some(c.lower.clone()),
                upper: Some(c.upper.clone()),
                tolerance: Some(c.tolerance.clone()),
                provenance: c.provenance.clone(),
                pass: None,
                cache_hit: Some(hit.is_none()),
            },
            (Some(Ok(c)), None) => Entry {
                function,
                name: m.to_string(),
                value: Value::Text(c.value.clone()),
                lower: Some(c.lower.clone()),
                upper: Some(c.upper.clone()),
                tolerance: Some(c.tolerance.clone()),
                provenance: c.provenance.clone(),
                pass: None,
                cache_hit: Some(false),
            },
            (None, None) => unreachable!("every job is cached or computed"),
        };
        report.push(entry);
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    emit(&report, out)?;
    Ok(report.pass)
}

fn load_algorithm(args: &VerifyArgs) -> Result<Option<QueryAlgorithm>> {
    if let Some(name) = &args.alg {
        let (alg, _) = named_algorithm(name)
            .ok_or_else(|| anyhow!("unknown algorithm {name:?}; known: {}", ALGORITHM_NAMES.join(", ")))?;
        return Ok(Some(alg));
    }
    if let Some(path) = &args.alg_file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Some(parse_algorithm(&text, args.dim_cap)?));
    }
    Ok(None)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let start = Instant::now();
    if !EXPERIMENTS.contains(&args.experiment.as_str()) {
        bail!("UnknownExperiment: {:?}; valid experiments are {}", args.experiment, EXPERIMENTS.join(", "));
    }
    let seed = args.seed;
    let result = match args.experiment.as_str() {
        "hybrid" => match load_algorithm(args)? {
            Some(alg) => {
                let x = args.x.as_deref().ok_or_else(|| anyhow!("--x is required with an algorithm"))?;
                let x = parse_word(x).ok_or_else(|| anyhow!("bad input string {x:?}"))?;
                if args.block.is_empty() || args.block.contains(&0) {
                    bail!("--block needs 1-based positions");
                }
                let block = querybench::boolfn::Block::new(args.block.iter().map(|p| p - 1), alg.n())?;
                experiments::hybrid_single(&alg, &x, &block)
            }
            None => experiments::hybrid_suite_report(),
        },
        "trace-identity" => experiments::trace_identity(args.samples, seed),
        "collision" => experiments::collision(args.n.unwrap_or(4)),
        "chain" => {
            let custom = args.n.is_some() || args.exhaustive || args.random.is_some();
            let functions = if custom {
                experiments::chain_functions(args.n.unwrap_or(3), args.exhaustive, args.random_n, args.random.unwrap_or(0), seed)
            } else {
                experiments::chain_functions(3, true, 4, 200, seed)
            };
            if args.n.is_some_and(|n| n > 6) || args.random_n > 6 {
                bail!("chain functions are limited to 6 bits");
            }
            experiments::chain(&functions, args.tol)
        }
        "adversary" => experiments::adversary(args.tol),
        "adeg-parity" => experiments::adeg_parity(args.n.unwrap_or(4)),
        "qszk-product" => experiments::qszk_product(),
        "qszk-complement" => experiments::qszk_complement_report(),
        "cert-finder" => experiments::cert_finder(args.seeds, seed),
        "zero-error" => experiments::zero_error(args.seeds, seed, args.max_batches),
        "sabotage" => experiments::sabotage_report(),
        "rdrs" => experiments::rdrs(),
        "blocks" => experiments::blocks(args.n.unwrap_or(4)),
        _ => unreachable!("checked above"),
    }?;
    let mut report = Report::new(argv(), Some(seed));
    report.add_experiment(&result);
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    emit(&report, args.out.as_deref())?;
    Ok(report.pass)
}

fn save_catalog(path: &Path, cat: &Catalog) -> Result<()> {
    fs::write(path, cat.to_text()).with_context(|| format!("writing {}", path.display()))
}

fn add_entry(cat: &mut Catalog, name: &str, spec: BuiltinSpec, cap: usize) -> Result<FunctionId> {
    let entry = cat.add_builtin(name, spec, cap).map_err(describe)?;
    Ok(FunctionId::of(&entry.name, &entry.function))
}

fn cmd_compose(path: &Path, cap: usize, name: Option<&str>, spec: &[String]) -> Result<bool> {
    let tokens: Vec<&str> = spec.iter().map(String::as_str).collect();
    let spec = BuiltinSpec::parse(&tokens).map_err(|e| anyhow!("bad constructor: {e}"))?;
    let mut cat = load_writable(path, cap)?;
    let name = name.map(str::to_string).unwrap_or_else(|| spec.derived_name());
    let id = add_entry(&mut cat, &name, spec, cap)?;
    save_catalog(path, &cat)?;
    write_stdout(&format!("{}\n", serde_json::to_string_pretty(&id)?))?;
    Ok(true)
}

fn read_listing(path: &Path, n: usize, q: u8) -> Result<PartialFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || anyhow!("{}:{}: expected `string bit`", path.display(), k + 1);
        let (w, v) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
        let word = parse_word(w).ok_or_else(bad)?;
        let value = match v.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        rows.push((word, value));
    }
    Ok(PartialFunction::new(n, q, rows)?)
}

fn cmd_catalog(cmd: &CatalogCommand) -> Result<bool> {
    match cmd {
        CatalogCommand::List { catalog } => {
            let cat = load_catalog(catalog.catalog.as_deref(), catalog.cap)?;
            let mut listing = String::new();
            for e in cat.entries() {
                let f = &e.function;
                let hash = report::content_hash(f);
                listing.push_str(&format!("{:<16} n={:<3} q={} |Dom|={:<8} {hash}\n", e.name, f.n(), f.q(), f.domain_size()));
            }
            write_stdout(&listing)?;
        }
        CatalogCommand::Add { catalog, cap, name, spec, listing, n, q } => {
            let mut cat = load_writable(catalog, *cap)?;
            let id = match listing {
                Some(file) => {
                    let n = n.ok_or_else(|| anyhow!("--n is required with --listing"))?;
                    let f = read_listing(file, n, *q)?;
                    cat.add_listing(name, f).map_err(describe)?;
                    FunctionId::of(name, cat.get(name).expect("just added"))
                }
                None => {
                    if spec.is_empty() {
                        bail!("give a constructor or --listing");
                    }
                    let tokens: Vec<&str> = spec.iter().map(String::as_str).collect();
                    let s = BuiltinSpec::parse(&tokens).map_err(|e| anyhow!("bad constructor: {e}"))?;
                    add_entry(&mut cat, name, s, *cap)?
                }
            };
            save_catalog(catalog, &cat)?;
            write_stdout(&format!("{}\n", serde_json::to_string_pretty(&id)?))?;
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Measures { catalog, functions, measure, tol, cache, workers, out } => {
            cmd_measures(catalog, functions, measure, *tol, cache.as_deref(), *workers, out.as_deref())
        }
        Command::Verify(args) => cmd_verify(args),
        Command::Compose { catalog, cap, name, spec } => cmd_compose(catalog, *cap, name.as_deref(), spec),
        Command::Catalog(c) => cmd_catalog(c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
