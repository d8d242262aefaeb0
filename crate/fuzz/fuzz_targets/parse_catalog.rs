#![no_main]

use libfuzzer_sys::fuzz_target;
use querybench::boolfn::parse_catalog;

// Small cap so constructors cannot blow up the enumeration.
const CAP: usize = 1 << 12;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(catalog) = parse_catalog(text, CAP) {
        let again = parse_catalog(&catalog.to_text(), CAP).expect("serialized catalogs parse");
        assert_eq!(again.to_text(), catalog.to_text());
    }
});
