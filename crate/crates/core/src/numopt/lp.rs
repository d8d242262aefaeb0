//! Dense two-phase simplex over exact rationals with Bland's pivoting rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Shorthand for the rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective·x` subject to the rows and the per-variable bounds.
/// Variables without bounds are free.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLP {
    pub variables: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, assignment: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Self::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl RationalLP {
    /// An instance with a zero objective, no rows and free variables.
    pub fn new(variables: usize) -> Self {
        Self {
            variables,
            objective: vec![Rational::zero(); variables],
            constraints: Vec::new(),
            lower: vec![None; variables],
            upper: vec![None; variables],
        }
    }

    /// Sets every lower bound to zero.
    pub fn nonnegative(mut self) -> Self {
        self.lower = vec![Some(Rational::zero()); self.variables];
        self
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), self.variables, "objective length");
        self.objective = objective;
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.variables, "row length");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a row given as sparse `(variable, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.variables];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.add(coeffs, relation, rhs);
    }
}

/// How an original variable is expressed through nonnegative columns.
enum Substitution {
    /// `x = offset + y`
    Shifted { column: usize, offset: Rational },
    /// `x = offset - y`
    Mirrored { column: usize, offset: Rational },
    /// `x = y⁺ - y⁻`
    Split { plus: usize, minus: usize },
}

struct Tableau {
    /// `rows × (cols + 1)`, the last entry of each row being the right-hand side.
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, obj: &mut [Rational]) {
        let p = self.a[row][col].clone();
        if !p.is_one() {
            for v in self.a[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.a[row].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for &j in &nz {
                r[j] -= &factor * &pivot_row[j];
            }
        }
        if !obj[col].is_zero() {
            let factor = obj[col].clone();
            for &j in &nz {
                obj[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes with reduced costs in `obj` (`obj[j] > 0` means column `j`
    /// improves). Columns at or beyond `allowed` never enter.
    /// Returns false when unbounded.
    fn optimize(&mut self, obj: &mut [Rational], allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.a.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[self.cols] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col, obj),
                None => return false,
            }
        }
    }
}

/// Solves the instance exactly.
pub fn lp_solve(p: &RationalLP) -> LpOutcome {
    let nv = p.variables;
    assert_eq!(p.objective.len(), nv);
    assert_eq!(p.lower.len(), nv);
    assert_eq!(p.upper.len(), nv);

    // Map each original variable onto nonnegative columns.
    let mut subs = Vec::with_capacity(nv);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..nv {
        let sub = match (&p.lower[j], &p.upper[j]) {
            (Some(l), u) => {
                if let Some(u) = u {
                    if u < l {
                        return LpOutcome::Infeasible;
                    }
                    extra_rows.push((ncols, u - l));
                }
                Substitution::Shifted { column: ncols, offset: l.clone() }
            }
            (None, Some(u)) => Substitution::Mirrored { column: ncols, offset: u.clone() },
            (None, None) => {
                ncols += 1;
                Substitution::Split { plus: ncols - 1, minus: ncols }
            }
        };
        ncols += 1;
        subs.push(sub);
    }

    // Rewrite rows in the new columns: each becomes (coeffs, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    let mut objective = vec![Rational::zero(); ncols];
    let mut constant = Rational::zero();
    let expand = |coeffs: &[Rational], out: &mut Vec<Rational>, shift: &mut Rational| {
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match &subs[j] {
                Substitution::Shifted { column, offset } => {
                    out[*column] += c;
                    *shift += c * offset;
                }
                Substitution::Mirrored { column, offset } => {
                    out[*column] -= c;
                    *shift += c * offset;
                }
                Substitution::Split { plus, minus } => {
                    out[*plus] += c;
                    out[*minus] -= c;
                }
            }
        }
    };
    expand(&p.objective, &mut objective, &mut constant);
    for con in &p.constraints {
        assert_eq!(con.coeffs.len(), nv, "row length");
        let mut coeffs = vec![Rational::zero(); ncols];
        let mut shift = Rational::zero();
        expand(&con.coeffs, &mut coeffs, &mut shift);
        rows.push((coeffs, con.relation, &con.rhs - shift));
    }
    for (column, width) in extra_rows {
        let mut coeffs = vec![Rational::zero(); ncols];
        coeffs[column] = Rational::one();
        rows.push((coeffs, Relation::Le, width));
    }

    // Normalize right-hand sides to be nonnegative.
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Column layout: structural | slack/surplus | artificial | rhs.
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = ncols + n_slack;
    let cols = art_start + n_art;
    let mut a = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (ncols, art_start);
    for (coeffs, rel, rhs) in rows {
        let mut r = coeffs;
        r.resize(cols + 1, Rational::zero());
        r[cols] = rhs;
        match rel {
            Relation::Le => {
                r[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                r[next_slack] = -Rational::one();
                next_slack += 1;
                r[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                r[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        a.push(r);
    }
    let mut t = Tableau { a, basis, cols };

    // Phase 1: maximize -(sum of artificials).
    if n_art > 0 {
        let mut obj = vec![Rational::zero(); cols + 1];
        for (i, r) in t.a.iter().enumerate() {
            if t.basis[i] >= art_start {
                for j in 0..=cols {
                    if j < art_start || j == cols {
                        obj[j] += &r[j];
                    }
                }
            }
        }
        t.optimize(&mut obj, art_start);
        if obj[cols].is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.a[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j, &mut obj),
                    None => {
                        // Redundant row.
                        t.a.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2 with reduced costs of the true objective.
    let mut obj = vec![Rational::zero(); cols + 1];
    obj[..ncols].clone_from_slice(&objective);
    for (i, r) in t.a.iter().enumerate() {
        let cb = if t.basis[i] < ncols { objective[t.basis[i]].clone() } else { Rational::zero() };
        if cb.is_zero() {
            continue;
        }
        for j in 0..=cols {
            if !r[j].is_zero() {
                obj[j] -= &cb * &r[j];
            }
        }
    }
    if !t.optimize(&mut obj, art_start) {
        return LpOutcome::Unbounded;
    }

    let mut y = vec![Rational::zero(); ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ncols {
            y[b] = t.a[i][cols].clone();
        }
    }
    let assignment: Vec<Rational> = subs
        .iter()
        .map(|s| match s {
            Substitution::Shifted { column, offset } => offset + &y[*column],
            Substitution::Mirrored { column, offset } => offset - &y[*column],
            Substitution::Split { plus, minus } => &y[*plus] - &y[*minus],
        })
        .collect();
    let value = p.objective.iter().zip(&assignment).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal { value, assignment }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64) -> Rational {
        rat(p, 1)
    }

    #[test]
    fn bounded_above() {
        let mut lp = RationalLP::new(1).maximize(vec![r(1)]);
        lp.add(vec![r(1)], Relation::Le, r(3));
        lp.add(vec![r(1)], Relation::Ge, r(0));
        assert_eq!(lp_solve(&lp).value(), Some(&r(3)));
    }

    #[test]
    fn infeasible() {
        let mut lp = RationalLP::new(1).maximize(vec![r(1)]);
        lp.add(vec![r(1)], Relation::Le, r(1));
        lp.add(vec![r(1)], Relation::Ge, r(2));
        assert_eq!(lp_solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded() {
        let mut lp = RationalLP::new(1).maximize(vec![r(1)]);
        lp.add(vec![r(1)], Relation::Ge, r(0));
        assert_eq!(lp_solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_instance() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18, x,y >= 0 -> 36 at (2, 6)
        let mut lp = RationalLP::new(2).nonnegative().maximize(vec![r(3), r(5)]);
        lp.add(vec![r(1), r(0)], Relation::Le, r(4));
        lp.add(vec![r(0), r(2)], Relation::Le, r(12));
        lp.add(vec![r(3), r(2)], Relation::Le, r(18));
        match lp_solve(&lp) {
            LpOutcome::Optimal { value, assignment } => {
                assert_eq!(value, r(36));
                assert_eq!(assignment, vec![r(2), r(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractional_optimum_and_bounds() {
        // max x + y, 3x + y <= 2, x + 3y <= 2 -> x = y = 1/2
        let mut lp = RationalLP::new(2).nonnegative().maximize(vec![r(1), r(1)]);
        lp.add(vec![r(3), r(1)], Relation::Le, r(2));
        lp.add(vec![r(1), r(3)], Relation::Le, r(2));
        assert_eq!(lp_solve(&lp).value(), Some(&r(1)));

        // Free variable with explicit box bounds: min x over [-5/2, 7].
        let mut lp = RationalLP::new(1).maximize(vec![r(-1)]);
        lp.lower[0] = Some(rat(-5, 2));
        lp.upper[0] = Some(r(7));
        assert_eq!(lp_solve(&lp).value(), Some(&rat(5, 2)));

        // Upper bound only.
        let mut lp = RationalLP::new(1).maximize(vec![r(2)]);
        lp.upper[0] = Some(rat(-1, 3));
        assert_eq!(lp_solve(&lp).value(), Some(&rat(-2, 3)));
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 twice, max x - y on free variables bounded by x <= 2.
        let mut lp = RationalLP::new(2).maximize(vec![r(1), r(-1)]);
        lp.add(vec![r(1), r(1)], Relation::Eq, r(1));
        lp.add(vec![r(2), r(2)], Relation::Eq, r(2));
        lp.add(vec![r(1), r(0)], Relation::Le, r(2));
        match lp_solve(&lp) {
            LpOutcome::Optimal { value, assignment } => {
                assert_eq!(value, r(3));
                assert_eq!(assignment, vec![r(2), r(-1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut lp = RationalLP::new(4)
            .nonnegative()
            .maximize(vec![rat(3, 4), r(-150), rat(1, 50), r(-6)]);
        lp.add(vec![rat(1, 4), r(-60), rat(-1, 25), r(9)], Relation::Le, r(0));
        lp.add(vec![rat(1, 2), r(-90), rat(-1, 50), r(3)], Relation::Le, r(0));
        lp.add(vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1));
        assert_eq!(lp_solve(&lp).value(), Some(&rat(1, 20)));
    }
}
