use num_traits::ToPrimitive;

use super::{
    adv, approx_degree, block_sensitivity, certificate_complexity, dtree_complexity, exact_degree,
    fractional_block_sensitivity, gen_adv, sensitivity, MeasureError, MeasureReport,
};
use crate::boolfn::PartialFunction;
use crate::numopt::{rat, Rational};

/// One inequality `lhs <= rhs (+ slack)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub measures: Vec<MeasureReport>,
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn exact(r: &MeasureReport) -> Rational {
    r.exact.clone().expect("exact measure")
}

fn exact_check(name: &str, lhs: &MeasureReport, rhs: &MeasureReport) -> ChainCheck {
    let (l, r) = (exact(lhs), exact(rhs));
    ChainCheck {
        relation: name.into(),
        lhs: l.to_f64().unwrap_or(f64::NAN),
        rhs: r.to_f64().unwrap_or(f64::NAN),
        slack: 0.0,
        pass: l <= r,
    }
}

/// Checks `s <= bs <= fbs <= C <= D <= n`, `adeg <= deg <= D` (exactly) and
/// `adv <= gen_adv + 2·tol` on a total binary function.
pub fn check_chain(f: &PartialFunction, tol: f64) -> Result<ChainReport, MeasureError> {
    if !f.is_total() {
        return Err(MeasureError::PartialUnsupported);
    }
    let s = sensitivity(f)?;
    let bs = block_sensitivity(f)?;
    let fbs = fractional_block_sensitivity(f)?;
    let c = certificate_complexity(f);
    let d = dtree_complexity(f);
    let n = MeasureReport::exact_int("n", f.n() as u64, super::Provenance::ExactEnumeration);
    let adeg = approx_degree(f, &rat(1, 3))?;
    let deg = exact_degree(f)?;
    let a = adv(f, tol)?;
    let g = gen_adv(f, tol)?;
    let checks = vec![
        exact_check("s <= bs", &s, &bs),
        exact_check("bs <= fbs", &bs, &fbs),
        exact_check("fbs <= C", &fbs, &c),
        exact_check("C <= D", &c, &d),
        exact_check("D <= n", &d, &n),
        exact_check("adeg <= deg", &adeg, &deg),
        exact_check("deg <= D", &deg, &d),
        ChainCheck {
            relation: "adv <= gen_adv + 2tol".into(),
            lhs: a.value,
            rhs: g.value,
            slack: 2.0 * tol,
            pass: a.value <= g.value + 2.0 * tol,
        },
    ];
    Ok(ChainReport { measures: vec![s, bs, fbs, c, d, adeg, deg, a, g], checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority3_chain() {
        let r = check_chain(&PartialFunction::majority(3), 1e-4).unwrap();
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.checks.len(), 8);
    }

    #[test]
    fn partial_rejected() {
        assert_eq!(
            check_chain(&PartialFunction::unique_marked_or(3), 1e-4),
            Err(MeasureError::PartialUnsupported)
        );
    }
}
