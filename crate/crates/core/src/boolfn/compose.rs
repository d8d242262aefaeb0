use super::{BoolFnError, PartialFunction};

/// Largest domain any constructor will enumerate unless told otherwise.
pub const DEFAULT_DOMAIN_CAP: usize = 1 << 20;

fn check_size(factors: &[(u128, u32)], cap: usize) -> Result<(), BoolFnError> {
    let mut size: u128 = 1;
    let mut text = Vec::new();
    for &(base, exp) in factors {
        text.push(format!("{base}^{exp}"));
        for _ in 0..exp {
            size = size.saturating_mul(base);
            if size > cap as u128 {
                return Err(BoolFnError::ArityOverflow { required: text.join("*"), cap });
            }
        }
    }
    Ok(())
}

fn check_positions(n: usize) -> Result<(), BoolFnError> {
    if n > 63 {
        return Err(BoolFnError::ArityOverflow { required: format!("2^{n}"), cap: 1 << 63 });
    }
    Ok(())
}

/// Iterates all `k`-tuples of indices below `base`.
fn tuples(base: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.checked_pow(k as u32).unwrap_or(0);
    (0..total).map(move |mut t| {
        let mut digits = vec![0; k];
        for d in digits.iter_mut().rev() {
            *d = t % base;
            t /= base;
        }
        digits
    })
}

/// Full composition `f ∘ g`: block `j` of `n_g` positions feeds position `j` of `f`.
pub fn compose_full(
    f: &PartialFunction,
    g: &PartialFunction,
    cap: usize,
) -> Result<PartialFunction, BoolFnError> {
    f.require_binary()?;
    g.require_binary()?;
    let (nf, ng) = (f.n(), g.n());
    check_positions(nf * ng)?;
    check_size(&[(g.domain_size() as u128, nf as u32)], cap)?;
    let inner = g.codes();
    let mut entries = Vec::new();
    for tuple in tuples(inner.len(), nf) {
        let mut code = 0u64;
        let mut outer = 0u64;
        for &t in &tuple {
            code = (code << ng) | inner[t].0;
            outer = (outer << 1) | inner[t].1 as u64;
        }
        if let Some(v) = f.value_at_code(outer) {
            entries.push((code, v));
        }
    }
    let name = format!("{}o{}", f.label(), g.label());
    Ok(PartialFunction::from_codes(nf * ng, 2, entries)?.with_name(name))
}

/// `Ind_k ∘_k f` on `n·k + 2^k` positions: `k` copies of `f` produce a
/// pointer, read most-significant-bit first, into a `2^k`-bit array.
pub fn compose_index(
    f: &PartialFunction,
    k: usize,
    cap: usize,
) -> Result<PartialFunction, BoolFnError> {
    f.require_binary()?;
    if k == 0 || k > 5 {
        return Err(BoolFnError::ArityOverflow { required: format!("k = {k}"), cap });
    }
    let cells = 1usize << k;
    let n = f.n() * k + cells;
    check_positions(n)?;
    check_size(&[(f.domain_size() as u128, k as u32), (2, cells as u32)], cap)?;
    let inner = f.codes();
    let mut entries = Vec::new();
    for tuple in tuples(inner.len(), k) {
        let mut prefix = 0u64;
        let mut pointer = 0usize;
        for &t in &tuple {
            prefix = (prefix << f.n()) | inner[t].0;
            pointer = (pointer << 1) | inner[t].1 as usize;
        }
        for array in 0..1u64 << cells {
            let value = array >> (cells - 1 - pointer) & 1 == 1;
            entries.push(((prefix << cells) | array, value));
        }
    }
    let name = format!("IND{k}_{}", f.label());
    Ok(PartialFunction::from_codes(n, 2, entries)?.with_name(name))
}

/// `UInd_k ∘_k f` on `n·k + 2·2^k` positions. The array holds `2^k` pairs;
/// the pointed-to pair has second bit 1, every other pair second bit 0, and
/// the value is the first bit of the pointed-to pair.
pub fn compose_uind(
    f: &PartialFunction,
    k: usize,
    cap: usize,
) -> Result<PartialFunction, BoolFnError> {
    f.require_binary()?;
    if k == 0 || k > 4 {
        return Err(BoolFnError::ArityOverflow { required: format!("k = {k}"), cap });
    }
    let pairs = 1usize << k;
    let width = 2 * pairs;
    let n = f.n() * k + width;
    check_positions(n)?;
    check_size(&[(f.domain_size() as u128, k as u32), (2, pairs as u32)], cap)?;
    let inner = f.codes();
    let mut entries = Vec::new();
    for tuple in tuples(inner.len(), k) {
        let mut prefix = 0u64;
        let mut pointer = 0usize;
        for &t in &tuple {
            prefix = (prefix << f.n()) | inner[t].0;
            pointer = (pointer << 1) | inner[t].1 as usize;
        }
        let marker = 1u64 << (width - 1 - (2 * pointer + 1));
        for firsts in 0..1u64 << pairs {
            let mut array = marker;
            for j in 0..pairs {
                if firsts >> (pairs - 1 - j) & 1 == 1 {
                    array |= 1 << (width - 1 - 2 * j);
                }
            }
            let value = firsts >> (pairs - 1 - pointer) & 1 == 1;
            entries.push(((prefix << width) | array, value));
        }
    }
    let name = format!("UIND{k}_{}", f.label());
    Ok(PartialFunction::from_codes(n, 2, entries)?.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{parse_word, Letter};

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn and_of_ands() {
        let a = PartialFunction::and(2);
        let f = compose_full(&a, &a, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(f.n(), 4);
        assert_eq!(f.domain_size(), 16);
        assert!(f.evaluate(&w("1111")).unwrap());
        assert!(!f.evaluate(&w("1110")).unwrap());
    }

    #[test]
    fn full_composition_filters_by_outer_domain() {
        let outer = PartialFunction::unique_marked_or(2);
        let inner = PartialFunction::identity();
        let f = compose_full(&outer, &inner, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(f, outer);
    }

    #[test]
    fn index_of_identity() {
        let id = PartialFunction::identity();
        let f = compose_index(&id, 1, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(f.n(), 3);
        assert!(f.is_total());
        assert!(f.evaluate(&w("1|01")).unwrap());
        assert!(!f.evaluate(&w("1|10")).unwrap());
        let g = compose_index(&id, 2, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(g.n(), 6);
        assert!(!g.evaluate(&w("10|0100")).unwrap());
        assert!(g.evaluate(&w("01|0100")).unwrap());
    }

    #[test]
    fn index_of_partial_is_partial() {
        let f = compose_index(&PartialFunction::unique_marked_or(2), 1, DEFAULT_DOMAIN_CAP)
            .unwrap();
        assert!(!f.is_total());
        assert_eq!(f.domain_size(), 3 * 4);
    }

    #[test]
    fn uind_promise() {
        let id = PartialFunction::identity();
        let f = compose_uind(&id, 1, DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(f.n(), 5);
        assert!(f.evaluate(&w("0|11|00")).unwrap());
        assert!(!f.evaluate(&w("0|01|00")).unwrap());
        assert!(f.evaluate(&w("0|10|00")).is_err());
        assert!(f.evaluate(&w("0|11|01")).is_err());
        assert!(f.evaluate(&w("1|10|11")).unwrap());
        // 2 pointer values times 4 settings of the first bits.
        assert_eq!(f.domain_size(), 8);
    }

    #[test]
    fn index_overflow() {
        let or4 = PartialFunction::or(4);
        assert!(matches!(
            compose_index(&or4, 5, DEFAULT_DOMAIN_CAP),
            Err(BoolFnError::ArityOverflow { .. })
        ));
        assert!(matches!(
            compose_index(&or4, 3, 1000),
            Err(BoolFnError::ArityOverflow { .. })
        ));
    }

    #[test]
    fn non_binary_rejected() {
        let c = PartialFunction::collision(4).unwrap();
        assert_eq!(
            compose_index(&c, 1, DEFAULT_DOMAIN_CAP),
            Err(BoolFnError::AlphabetUnsupported(4))
        );
        let sab = crate::boolfn::sabotage(&PartialFunction::and(2)).unwrap();
        assert_eq!(
            compose_full(&sab, &PartialFunction::identity(), DEFAULT_DOMAIN_CAP),
            Err(BoolFnError::AlphabetUnsupported(4))
        );
    }
}
