use anyhow::{bail, Result};
use querybench::boolfn::PartialFunction;
use querybench::experiments::{format_exact, format_real};
use querybench::measures::{
    adv, approx_degree, block_sensitivity, certificate_complexity, dtree_complexity, exact_degree,
    fractional_block_sensitivity, gen_adv, qd_bounds, sensitivity, MeasureError, MeasureReport,
};
use querybench::numopt::rat;

use crate::cache::CachedMeasure;

pub const MEASURES: &[&str] = &["D", "C", "s", "bs", "fbs", "deg", "adeg", "adv", "gen_adv", "QD"];

pub fn check_names(names: &[String]) -> Result<()> {
    for m in names {
        if !MEASURES.contains(&m.as_str()) {
            bail!("UnknownMeasure: {m:?}; valid measures are {}", MEASURES.join(", "));
        }
    }
    Ok(())
}

/// Parameters that change the value; exact measures ignore the tolerance.
pub fn params(measure: &str, tol: f64) -> String {
    match measure {
        "adv" | "gen_adv" | "QD" => format!("tol={}", format_real(tol)),
        "adeg" => "error=1/3".into(),
        _ => String::new(),
    }
}

fn stored(r: &MeasureReport) -> CachedMeasure {
    match &r.exact {
        Some(e) => CachedMeasure {
            value: format_exact(e),
            exact: true,
            lower: format_exact(e),
            upper: format_exact(e),
            tolerance: format_real(0.0),
            provenance: r.provenance.to_string(),
        },
        None => CachedMeasure {
            value: format_real(r.value),
            exact: false,
            lower: format_real(r.lower),
            upper: format_real(r.upper),
            tolerance: format_real(r.tolerance),
            provenance: r.provenance.to_string(),
        },
    }
}

/// Whether the error says the measure is not defined for this function,
/// as opposed to a failed computation.
pub fn not_applicable(e: &MeasureError) -> bool {
    matches!(e, MeasureError::AlphabetUnsupported(_) | MeasureError::PartialUnsupported)
}

pub fn compute(f: &PartialFunction, measure: &str, tol: f64) -> Result<CachedMeasure, MeasureError> {
    let r = match measure {
        "D" => dtree_complexity(f),
        "C" => certificate_complexity(f),
        "s" => sensitivity(f)?,
        "bs" => block_sensitivity(f)?,
        "fbs" => fractional_block_sensitivity(f)?,
        "deg" => exact_degree(f)?,
        "adeg" => approx_degree(f, &rat(1, 3))?,
        "adv" => adv(f, tol)?,
        "gen_adv" => gen_adv(f, tol)?,
        "QD" => {
            let (lo, hi) = qd_bounds(f, tol)?;
            return Ok(CachedMeasure {
                value: format_real(lo.value),
                exact: false,
                lower: format_real(lo.lower),
                upper: format_real(hi.upper),
                tolerance: format_real(tol),
                provenance: format!("{} .. {}", lo.provenance, hi.provenance),
            });
        }
        other => unreachable!("unchecked measure {other}"),
    };
    Ok(stored(&r))
}
