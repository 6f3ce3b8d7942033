#![no_main]

use libfuzzer_sys::fuzz_target;
use outgen::corpus::{parse_conllu, to_conllu_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(stories) = parse_conllu(text, None) {
        // whatever parses must survive a write/read cycle unchanged
        let again = parse_conllu(&to_conllu_string(&stories), None).expect("re-parse");
        assert_eq!(again, stories);
    }
});
