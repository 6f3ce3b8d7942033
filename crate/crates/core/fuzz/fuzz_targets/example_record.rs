#![no_main]

use libfuzzer_sys::fuzz_target;
use outgen::corpus::{parse_example_record, LoadOptions};

fuzz_target!(|data: &[u8]| {
    let Some((&mode, rest)) = data.split_first() else {
        return;
    };
    let Ok(line) = std::str::from_utf8(rest) else { return };
    let opts = LoadOptions { strict: mode & 1 == 0 };
    if let Ok(example) = parse_example_record(line, 1, opts) {
        assert!(!example.id.is_empty());
        assert!(!example.story.is_empty());
        if opts.strict {
            assert_eq!(example.phrases.len(), 8);
        }
    }
});
