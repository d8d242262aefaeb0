#![no_main]

use libfuzzer_sys::fuzz_target;
use querybench::qsim::{parse_algorithm, write_algorithm};

const CAP: usize = 64;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(alg) = parse_algorithm(text, CAP) {
        let again = parse_algorithm(&write_algorithm(&alg), CAP).expect("written algorithms parse");
        assert_eq!(again.queries(), alg.queries());
        assert_eq!(again.dim(), alg.dim());
    }
});
