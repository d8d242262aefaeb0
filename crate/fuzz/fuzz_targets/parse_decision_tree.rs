#![no_main]

use libfuzzer_sys::fuzz_target;
use querybench::constructions::{parse_randomized, parse_tree};

// The first byte picks n and q; the rest is the text.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = 1 + (head & 7) as usize;
    let q = 2 + (head >> 3 & 3);
    if let Ok(tree) = parse_tree(text, n, q) {
        assert_eq!(parse_tree(&tree.to_text(), n, q).expect("tree text parses"), tree);
    }
    if let Ok(alg) = parse_randomized(text, n, q) {
        assert_eq!(parse_randomized(&alg.to_text(), n, q).expect("randomized text parses"), alg);
    }
});
