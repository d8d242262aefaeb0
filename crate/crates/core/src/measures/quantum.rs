use super::{MeasureError, MeasureReport, Provenance};
use crate::boolfn::PartialFunction;
use crate::numopt::{adversary_sdp, SdpAdversaryInstance, SignMode};

/// Default tolerance for adversary values.
pub const DEFAULT_TOL: f64 = 1e-4;

fn solve(f: &PartialFunction, mode: SignMode, tol: f64) -> Result<MeasureReport, MeasureError> {
    if !f.is_binary() {
        return Err(MeasureError::AlphabetUnsupported(f.q()));
    }
    let inst = SdpAdversaryInstance::from_function(f, mode)?;
    Ok(adversary_sdp(&inst, tol)?)
}

/// Positive-weights adversary bound `Adv(f)`.
pub fn adv(f: &PartialFunction, tol: f64) -> Result<MeasureReport, MeasureError> {
    Ok(solve(f, SignMode::Nonnegative, tol)?.renamed("adv"))
}

/// Negative-weights adversary bound, reported as the stand-in for `Q(f)`.
pub fn gen_adv(f: &PartialFunction, tol: f64) -> Result<MeasureReport, MeasureError> {
    Ok(solve(f, SignMode::Unrestricted, tol)?
        .renamed("gen_adv")
        .with_provenance(Provenance::Proxy("Θ of Q".into())))
}

/// Certified bracket for quantum distinguishing complexity: the lower end is
/// `max(adv(f), max_x adv(f^x))`, the upper end `gen_adv(f)`.
pub fn qd_bounds(f: &PartialFunction, tol: f64) -> Result<(MeasureReport, MeasureReport), MeasureError> {
    if f.constant_value().is_some() {
        let zero = |name: &str, note: &str| {
            MeasureReport::bracketed(name, 0.0, 0.0, tol, Provenance::Proxy(note.into()))
        };
        return Ok((zero("QD_lower", "adversary lower bound"), zero("QD_upper", "Θ of Q ≥ QD")));
    }
    let mut best = adv(f, tol)?;
    for x in f.domain() {
        let sub = adv(&f.subfunction(&x)?, tol)?;
        if sub.value > best.value {
            best = sub;
        }
    }
    let lower = best
        .renamed("QD_lower")
        .with_provenance(Provenance::Proxy("max of adv(f) and adv(f^x)".into()));
    let upper = gen_adv(f, tol)?
        .renamed("QD_upper")
        .with_provenance(Provenance::Proxy("Θ of Q ≥ QD".into()));
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or_family() {
        for n in 2..=4 {
            let r = adv(&PartialFunction::or(n), DEFAULT_TOL).unwrap();
            assert!((r.value - (n as f64).sqrt()).abs() < 1e-4, "n={n}: {r}");
        }
    }

    #[test]
    fn gen_adv_dominates() {
        for f in [PartialFunction::or(2), PartialFunction::majority(3), PartialFunction::parity(2)] {
            let a = adv(&f, DEFAULT_TOL).unwrap();
            let g = gen_adv(&f, DEFAULT_TOL).unwrap();
            assert!(a.value <= g.value + 2.0 * DEFAULT_TOL, "{a} vs {g}");
        }
    }

    #[test]
    fn qd_of_or2() {
        let (lo, hi) = qd_bounds(&PartialFunction::or(2), DEFAULT_TOL).unwrap();
        assert!((lo.value - 2f64.sqrt()).abs() < 1e-4, "{lo}");
        assert!(hi.value >= lo.value - 2.0 * DEFAULT_TOL);
        let (lo, hi) = qd_bounds(&PartialFunction::constant(2, false), DEFAULT_TOL).unwrap();
        assert_eq!((lo.value, hi.value), (0.0, 0.0));
    }
}
