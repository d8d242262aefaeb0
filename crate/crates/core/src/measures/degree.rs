use num_traits::{One, Signed, Zero};

use super::{MeasureError, MeasureReport, Provenance};
use crate::boolfn::PartialFunction;
use crate::numopt::{bisect_feasibility, lp_solve, rat, LpOutcome, RationalLP, Rational, Relation};

/// Monomial masks of degree at most `d` on `n` variables.
fn monomials(n: usize, d: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|m| m.count_ones() as usize <= d).collect()
}

/// Input code of `f` as a position mask (bit `i` = position `i`).
fn position_mask(f: &PartialFunction, code: u64) -> u64 {
    (0..f.n()).filter(|&i| f.letter(code, i) == 1).fold(0, |m, i| m | 1 << i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    /// `x^S = Π_{i∈S} x_i` over `{0,1}`.
    Monomial,
    /// `χ_S(x) = (-1)^{Σ_{i∈S} x_i}`.
    Fourier,
}

/// Smallest `e` such that some degree-`d` polynomial is within `e` of `f` on
/// its domain, as an exact rational.
fn best_error(f: &PartialFunction, d: usize, basis: Basis) -> Rational {
    let mons = monomials(f.n(), d);
    let k = mons.len();
    // Variables: coefficients (free), then the error e (>= 0). Maximize -e.
    let mut lp = RationalLP::new(k + 1);
    lp.lower[k] = Some(Rational::zero());
    let mut obj = vec![Rational::zero(); k + 1];
    obj[k] = -Rational::one();
    lp = lp.maximize(obj);
    for &(code, v) in f.codes() {
        let x = position_mask(f, code);
        let mut row: Vec<Rational> = mons
            .iter()
            .map(|&s| match basis {
                Basis::Monomial => rat((x & s == s) as i64, 1),
                Basis::Fourier => rat(if (x & s).count_ones() % 2 == 0 { 1 } else { -1 }, 1),
            })
            .collect();
        let fv = rat(v as i64, 1);
        // p(x) - e <= f(x) and p(x) + e >= f(x)
        row.push(-Rational::one());
        lp.add(row.clone(), Relation::Le, fv.clone());
        row[k] = Rational::one();
        lp.add(row, Relation::Ge, fv);
    }
    match lp_solve(&lp) {
        LpOutcome::Optimal { value, .. } => -value,
        other => unreachable!("error LP is feasible and bounded: {other:?}"),
    }
}

/// Whether a degree-`d` polynomial approximates `f` to within `error` on the
/// domain, decided by a pure feasibility LP in the monomial basis.
pub fn approximable(f: &PartialFunction, d: usize, error: &Rational) -> bool {
    let mons = monomials(f.n(), d);
    let mut lp = RationalLP::new(mons.len());
    for &(code, v) in f.codes() {
        let x = position_mask(f, code);
        let row: Vec<Rational> = mons.iter().map(|&s| rat((x & s == s) as i64, 1)).collect();
        let fv = rat(v as i64, 1);
        lp.add(row.clone(), Relation::Le, &fv + error);
        lp.add(row, Relation::Ge, &fv - error);
    }
    matches!(lp_solve(&lp), LpOutcome::Optimal { .. })
}

/// Approximate degree with the given pointwise error, constrained on the
/// domain only.
pub fn approx_degree(f: &PartialFunction, error: &Rational) -> Result<MeasureReport, MeasureError> {
    if !f.is_binary() {
        return Err(MeasureError::AlphabetUnsupported(f.q()));
    }
    if error.is_negative() {
        return Err(MeasureError::BadParameter("error must be nonnegative".into()));
    }
    let n = f.n() as i64;
    let d = bisect_feasibility(|d| approximable(f, d as usize, error), 0, n)
        .expect("the interpolating polynomial has degree at most n");
    Ok(MeasureReport::exact_int("adeg", d as u64, Provenance::ExactLp))
}

/// Approximate degree recomputed independently: a linear scan over degrees
/// minimizing the error in the Fourier basis.
pub fn approx_degree_fourier(f: &PartialFunction, error: &Rational) -> Result<MeasureReport, MeasureError> {
    if !f.is_binary() {
        return Err(MeasureError::AlphabetUnsupported(f.q()));
    }
    let d = (0..=f.n())
        .find(|&d| best_error(f, d, Basis::Fourier) <= *error)
        .expect("degree n is exact");
    Ok(MeasureReport::exact_int("adeg", d as u64, Provenance::ExactLp))
}

/// Least error achievable at degree `d`.
pub fn approximation_error(f: &PartialFunction, d: usize) -> Result<Rational, MeasureError> {
    if !f.is_binary() {
        return Err(MeasureError::AlphabetUnsupported(f.q()));
    }
    Ok(best_error(f, d, Basis::Monomial))
}

/// Multilinear coefficients of a total binary function, indexed by monomial mask.
pub fn mobius_coefficients(f: &PartialFunction) -> Result<Vec<i64>, MeasureError> {
    if !f.is_binary() {
        return Err(MeasureError::AlphabetUnsupported(f.q()));
    }
    if !f.is_total() {
        return Err(MeasureError::PartialUnsupported);
    }
    let n = f.n();
    let mut a = vec![0i64; 1 << n];
    for &(code, v) in f.codes() {
        a[position_mask(f, code) as usize] = v as i64;
    }
    for i in 0..n {
        for s in 0..a.len() {
            if s >> i & 1 == 1 {
                a[s] -= a[s ^ (1 << i)];
            }
        }
    }
    Ok(a)
}

/// `deg(f)`, the degree of the unique multilinear interpolant.
pub fn exact_degree(f: &PartialFunction) -> Result<MeasureReport, MeasureError> {
    let a = mobius_coefficients(f)?;
    let d = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(s, _)| s.count_ones())
        .max()
        .unwrap_or(0);
    Ok(MeasureReport::exact_int("deg", d as u64, Provenance::ExactEnumeration))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn third() -> Rational {
        rat(1, 3)
    }

    #[test]
    fn parity3() {
        let p = PartialFunction::parity(3);
        assert!(!approximable(&p, 2, &third()));
        assert!(approximable(&p, 3, &third()));
        assert_eq!(approx_degree(&p, &third()).unwrap().value, 3.0);
        assert_eq!(approx_degree_fourier(&p, &third()).unwrap().value, 3.0);
        // Degree below n cannot beat the constant 1/2.
        assert_eq!(approximation_error(&p, 2).unwrap(), rat(1, 2));
    }

    #[test]
    fn constants_and_and() {
        let c = PartialFunction::constant(3, true);
        assert_eq!(approx_degree(&c, &third()).unwrap().value, 0.0);
        assert_eq!(exact_degree(&c).unwrap().value, 0.0);
        let a = PartialFunction::and(2);
        let d1 = approx_degree(&a, &third()).unwrap().value;
        let d2 = approx_degree_fourier(&a, &third()).unwrap().value;
        assert_eq!(d1, d2);
        // (x1 + x2)/2 - 1/4 errs by exactly 1/4 on AND2.
        assert_eq!(approximation_error(&a, 1).unwrap(), rat(1, 4));
        assert_eq!(d1, 1.0);
    }

    #[test]
    fn exact_degrees() {
        for n in 1..=4 {
            assert_eq!(exact_degree(&PartialFunction::parity(n)).unwrap().value, n as f64);
            assert_eq!(exact_degree(&PartialFunction::and(n)).unwrap().value, n as f64);
        }
        assert_eq!(
            exact_degree(&PartialFunction::unique_marked_or(3)),
            Err(MeasureError::PartialUnsupported)
        );
    }

    #[test]
    fn partial_uses_domain_only() {
        // On the unique-marked promise OR is the linear function Σ x_i.
        let f = PartialFunction::unique_marked_or(4);
        assert_eq!(approx_degree(&f, &rat(0, 1)).unwrap().value, 1.0);
    }
}
