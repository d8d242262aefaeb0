use super::{BoolFnError, PartialFunction, DAGGER, STAR};

/// The sabotage function `f_sab` over `{0, 1, *, †}` (letters 0..4).
///
/// Its domain is `S_* ∪ S_†`: every string over `{0,1,*}` consistent with both
/// a 0-input and a 1-input of `f`, plus the same strings with `†` in place of
/// `*`. The value is 0 on `S_*` and 1 on `S_†`.
pub fn sabotage(f: &PartialFunction) -> Result<PartialFunction, BoolFnError> {
    f.require_binary()?;
    if f.constant_value().is_some() {
        return Err(BoolFnError::EmptySabotageSet);
    }
    let n = f.n();
    if n > 12 {
        return Err(BoolFnError::ArityOverflow { required: format!("3^{n}"), cap: 3usize.pow(12) });
    }
    // A string over {0,1,*} is a (mask, bits) pair: mask marks the fixed positions.
    let ones: Vec<u64> = f.codes().iter().filter(|e| e.1).map(|e| e.0).collect();
    let zeros: Vec<u64> = f.codes().iter().filter(|e| !e.1).map(|e| e.0).collect();
    let full = (1u64 << n) - 1;
    let mut entries = Vec::new();
    for mask in 0..=full {
        // Enumerate bit patterns on the fixed positions only.
        let mut bits = 0u64;
        loop {
            let consistent = |x: &u64| x & mask == bits;
            if ones.iter().any(consistent) && zeros.iter().any(consistent) {
                let mut star = 0u64;
                let mut dagger = 0u64;
                for pos in 0..n {
                    let bit = n - 1 - pos;
                    let place = 4u64.pow(bit as u32);
                    let (s, d) = if mask >> bit & 1 == 1 {
                        let l = bits >> bit & 1;
                        (l, l)
                    } else {
                        (STAR as u64, DAGGER as u64)
                    };
                    star += s * place;
                    dagger += d * place;
                }
                entries.push((star, false));
                entries.push((dagger, true));
            }
            if bits == mask {
                break;
            }
            bits = (bits.wrapping_sub(mask)) & mask;
        }
    }
    let name = format!("SAB_{}", f.label());
    Ok(PartialFunction::from_codes(n, 4, entries)?.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::parse_word;

    #[test]
    fn sabotaged_and2() {
        let sab = sabotage(&PartialFunction::and(2)).unwrap();
        assert_eq!(sab.domain_size(), 6);
        let stars: Vec<String> = sab
            .inputs_with_value(false)
            .map(|x| crate::boolfn::format_word(&x, 4))
            .collect();
        let mut expected = vec!["1*", "*1", "**"];
        expected.sort();
        let mut got = stars.clone();
        got.sort();
        assert_eq!(got, expected);
        assert!(sab.evaluate(&parse_word("†1").unwrap()).unwrap());
    }

    #[test]
    fn sabotaged_or2() {
        let sab = sabotage(&PartialFunction::or(2)).unwrap();
        assert_eq!(sab.domain_size(), 6);
        assert!(!sab.evaluate(&parse_word("0*").unwrap()).unwrap());
        assert!(sab.evaluate(&parse_word("*0").unwrap()).is_ok());
        assert!(sab.evaluate(&parse_word("1*").unwrap()).is_err());
    }

    #[test]
    fn constant_has_no_sabotage() {
        assert_eq!(
            sabotage(&PartialFunction::constant(2, false)),
            Err(BoolFnError::EmptySabotageSet)
        );
    }
}
