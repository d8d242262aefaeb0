#![no_main]

use libfuzzer_sys::fuzz_target;
use querybench::boolfn::{format_word, parse_word};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Some(word) = parse_word(text) {
        let q = word.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        assert_eq!(parse_word(&format_word(&word, q)), Some(word));
    }
});
