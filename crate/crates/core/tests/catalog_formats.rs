use proptest::prelude::*;

use querybench::boolfn::{format_word, parse_catalog, parse_word, BuiltinSpec, Catalog, PartialFunction, DEFAULT_DOMAIN_CAP};

fn listing() -> impl Strategy<Value = PartialFunction> {
    (1usize..4, 2u8..4).prop_flat_map(|(n, q)| {
        let size = (q as u64).pow(n as u32);
        prop::collection::btree_map(0..size, any::<bool>(), 1..=size as usize)
            .prop_map(move |m| PartialFunction::from_codes(n, q, m.into_iter().collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn words_round_trip(q in 2u8..37, raw in prop::collection::vec(any::<u8>(), 0..12)) {
        let word: Vec<u8> = raw.iter().map(|l| l % q).collect();
        prop_assert_eq!(parse_word(&format_word(&word, q)).unwrap(), word);
    }

    #[test]
    fn catalogs_round_trip(fs in prop::collection::vec(listing(), 1..4)) {
        let mut c = Catalog::new();
        for (k, f) in fs.into_iter().enumerate() {
            c.add_listing(&format!("F{k}"), f).unwrap();
        }
        c.add_builtin("S", BuiltinSpec::Sab("F0".into()), DEFAULT_DOMAIN_CAP).ok();
        let text = c.to_text();
        let back = parse_catalog(&text, DEFAULT_DOMAIN_CAP).unwrap();
        prop_assert_eq!(back.to_text(), text);
        for name in c.names() {
            prop_assert_eq!(back.get(name).unwrap().codes(), c.get(name).unwrap().codes());
        }
    }
}

#[test]
fn builtin_records_expand() {
    let text = "function OR4\nbuiltin OR 4\nend\nfunction U\nbuiltin UIND 1 OR4\nend\nfunction S\nbuiltin SAB OR4\nend\n";
    let c = parse_catalog(text, DEFAULT_DOMAIN_CAP).unwrap();
    assert_eq!(c.get("OR4").unwrap().domain_size(), 16);
    assert_eq!(c.get("S").unwrap().domain_size(), 2 * 15);
    assert_eq!(c.get("S").unwrap().q(), 4);
    assert!(c.get("U").unwrap().n() > 4);
}
